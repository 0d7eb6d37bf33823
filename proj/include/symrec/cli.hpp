#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symrec {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitInputError = 2,
    kExitConfigError = 3,
    kExitModelVersionError = 4,
};

// Entry point shared by the symrec binary and the tests. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symrec
