#pragma once

#include <string>

#include "ibptc/softblock.hpp"

namespace ibptc {

// One decoding round: block b, round r (both 1-based). Odd rounds decode the
// pre-permuted content, even rounds the post-permuted content.
struct DrId {
  int block = 0;
  int round = 0;
  Orientation orientation() const {
    return (round % 2 == 1) ? Orientation::pre_permuted : Orientation::post_permuted;
  }
  bool operator==(const DrId&) const = default;
};

struct ScheduleEntry {
  int cycle = 0;  // 1-based DT cycle
  int adu = 0;    // 0-based ADU id
  DrId dr;
};

struct ScheduleTable {
  int blocks = 0;
  int r_max = 0;
  int span = 0;
  int adus = 1;
  std::vector<ScheduleEntry> entries;  // cycle-major, ADU-id order within cycle
};

// Expanding-window zigzag order. Phase k holds {(b, r) : b + S*(r-1) = k} in
// increasing r; phases are dealt round-robin to ADUs by phase index. Each ADU
// performs at most one DR per DT cycle and stalls until every dependency
// (b', r-1) with |b' - b| <= S, clipped to [1, B], finished in a strictly
// earlier cycle. S = 0 degenerates to sequential per-block decoding.
ScheduleTable build_zigzag(int blocks, int r_max, int span, int adus);

// Empty list iff the table covers each (b, r) exactly once, respects the
// dependency rule, and serializes each ADU with strictly increasing cycles.
std::vector<std::string> validate_schedule(const ScheduleTable& table);

struct LatencyProfile {
  std::vector<int> completion;  // per block, DT cycle of its last round
  std::vector<int> ibdd;        // completion[k+1] - completion[k]
  int fbdd = 0;                 // completion of block 1
  int tdd = 0;                  // max completion
};

LatencyProfile latency_profile(const ScheduleTable& table);

// Blocks whose channel values can reach block b within I iterations (2I DRs):
// the +-S interval grown once per DR, clipped to [1, B]. Interior size 4SI+1.
std::vector<int> dependency_cone(int block, int iterations, int span, int num_blocks);

// Phase helpers shared with the dynamic pipeline executor.
int phase_count(int blocks, int r_max, int span);
std::vector<DrId> phase_drs(int phase, int blocks, int r_max, int span);

}  // namespace ibptc
