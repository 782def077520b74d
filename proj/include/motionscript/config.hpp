#pragma once

#include "motionscript/aggregate.hpp"
#include "motionscript/motioncode.hpp"
#include "motionscript/posecode.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace motionscript {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TextgenConfig {
  double p_inject_start = 0.5;
  double p_inject_end = 0.3;
  std::string templates;  // template file; empty for the built-in library

  void validate() const;
};

struct PipelineConfig {
  PosecodeThresholds posecode;
  NoiseConfig noise;
  MotioncodeConfig motioncode;
  AggregationConfig aggregation;
  SalienceStats salience = default_salience_stats();
  TextgenConfig textgen;
  std::vector<PosecodeInstance> instances = default_instances();

  std::uint64_t seed = 0;
  int captions_per_motion = 1;
  bool emit_intermediate = false;
  std::string output_dir = "out";
  int threads = 0;  // 0 = hardware concurrency

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Reads a JSON config; keys that are absent keep their defaults.
PipelineConfig parse_config(std::string_view json_text);
PipelineConfig load_config_file(const std::string& path);
std::string config_to_json(const PipelineConfig& config);

}  // namespace motionscript
