#pragma once

#include <stdexcept>
#include <string>

namespace symrec {

// Malformed or unreadable input (symbol files, manifests, evidence).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse failure with the 1-based line it happened on.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Configuration value out of range or unknown key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Model file written with an incompatible schema version.
class ModelVersionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace symrec
