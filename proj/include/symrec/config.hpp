#pragma once

#include "symrec/arg.hpp"
#include "symrec/bayesnet.hpp"
#include "symrec/signature.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace symrec {

struct PipelineConfig {
    ToleranceConfig tolerance;
    SchemaConfig schema;
    std::size_t discretize_bins = 16;
    GaConfig ga;
    double alpha = 1.0;
};

// Environment variable naming the default configuration file.
inline constexpr const char* kConfigEnvVar = "SYMREC_CONFIG";

struct ConfigKey {
    std::string name;
    std::string help;
};

const std::vector<ConfigKey>& config_keys();

// Sets one key from its textual value. Throws ConfigError for unknown keys
// or unparsable values.
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value);
std::string get_setting(const PipelineConfig& cfg, std::string_view key);

// "key = value" lines; '#' starts a comment.
void apply_config_text(PipelineConfig& cfg, std::string_view text);
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);
std::string config_to_text(const PipelineConfig& cfg);

void validate_config(const PipelineConfig& cfg);

}  // namespace symrec
