#pragma once

#include "ibptc/config.hpp"
#include "ibptc/stats.hpp"

namespace ibptc {

// Encodes/transmits/decodes blocks_per_run blocks at one Eb/N0 point.
// point_index selects the RNG substream; identical inputs give identical
// stats regardless of the caller's threading.
PointStats run_point(const RunConfig& cfg, double ebn0_db, std::size_t point_index);

// One stats row per sweep point, computed on a worker pool of cfg.threads.
std::vector<PointStats> run_ber(const RunConfig& cfg);

std::string ber_csv(const std::vector<PointStats>& points);
nlohmann::json ber_summary(const RunConfig& cfg, const std::vector<PointStats>& points);

struct LatencyReport {
  LatencyProfile ibptc;  // configured span
  LatencyProfile ctc;    // span-0 baseline, same blocks and rounds
};

// Static (no early termination) latency profiles for the configured stream.
LatencyReport run_latency(const RunConfig& cfg);

// "block,completion_cycle" rows plus FBDD/TDD summary comment lines.
std::string latency_csv(const LatencyProfile& profile);

}  // namespace ibptc
