#pragma once

#include "symrec/pipeline.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace symrec {

inline constexpr const char* kModelFormat = "symrec-model";
inline constexpr int kModelSchemaVersion = 1;

// Self-describing JSON document; the same model always serializes to the same bytes.
std::string save_model(const TrainedModel& model);
// Throws ModelVersionError on a version mismatch, InputError on malformed content.
TrainedModel load_model(std::string_view json_text);

void write_model_file(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel read_model_file(const std::filesystem::path& path);

// Human-readable listing: configuration, intervals, cutpoints, DAG, CPT shapes.
std::string describe_model(const TrainedModel& model);

}  // namespace symrec
