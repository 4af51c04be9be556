#pragma once

#include <string>

#include "dynamap/pipeline.hpp"

namespace dynamap {

/// Parses a pipeline config from JSON text. Every key is optional and falls
/// back to its default; unknown keys are rejected by name so typos cannot
/// silently fall back.
PipelineConfig parse_pipeline_config(const std::string &json_text);

/// Reads and parses a config file. Throws IoError / ConfigError.
PipelineConfig load_pipeline_config(const std::string &path);

/// Serializes the effective config, defaults included.
std::string dump_pipeline_config(const PipelineConfig &config);

RatioRule parse_ratio_rule(const std::string &name);
const char *to_string(RatioRule rule);

}  // namespace dynamap
