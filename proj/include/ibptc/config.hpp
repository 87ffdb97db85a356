#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ibptc/pipeline.hpp"

namespace ibptc {

struct RunConfig {
  CodeConfig code;
  DecoderConfig dec;
  std::vector<double> sweep;  // Eb/N0 points in dB
  int blocks_per_run = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = ".";
  std::string mode = "ibptc";  // or "ctc"
};

RunConfig default_config();

struct ConfigResult {
  RunConfig config;
  std::vector<std::string> errors;  // each names the offending key path
  bool ok() const { return errors.empty(); }
};

// Accepts a flat JSON object with dotted keys (e.g. {"ibpi.span": 1}); fills
// defaults for absent keys, validates every invariant, and returns violations
// as data. The document {} yields the full default configuration.
ConfigResult validate_config(const nlohmann::json& doc);

// Normalized echo of a config (the same flat key set).
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace ibptc
