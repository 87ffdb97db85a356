#pragma once

#include "ibptc/softblock.hpp"
#include "ibptc/trellis.hpp"

namespace ibptc {

// Backward-recursion boundary: open = uniform over states; zero_tail_padded =
// the last nu inputs are constrained to 0 (the tail positions saturate to
// +kLlrMax in the posterior).
enum class TrellisTermination { open, zero_tail_padded };

// log_map uses the exact Jacobian logarithm; max_log drops the correction.
enum class MetricMode { log_map, max_log };

struct AppInput {
  std::vector<double> systematic;
  std::vector<double> parity;
  std::vector<double> apriori;
  const TrellisSpec* trellis = nullptr;
  TrellisTermination termination = TrellisTermination::open;
  MetricMode metric = MetricMode::log_map;
};

struct AppResult {
  std::vector<double> posterior;  // saturated
  std::vector<double> extrinsic;  // saturated; posterior - systematic - apriori
};

// max*(x, y) = log(e^x + e^y) in log_map mode, max(x, y) in max_log mode.
double max_star(double x, double y, MetricMode mode);

// Forward/backward APP pass over one block. The forward recursion starts from
// state 0 with certainty. The extrinsic decomposition holds exactly before
// saturation and is asserted internally.
AppResult app_decode(const AppInput& in);

}  // namespace ibptc
