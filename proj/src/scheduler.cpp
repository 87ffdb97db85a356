#include "ibptc/scheduler.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ibptc/common.hpp"

namespace ibptc {

int phase_count(int blocks, int r_max, int span) {
  return blocks + span * (r_max - 1);
}

std::vector<DrId> phase_drs(int phase, int blocks, int r_max, int span) {
  std::vector<DrId> out;
  if (span == 0) {
    // Every round of one block shares its phase: sequential per-block decoding.
    if (phase >= 1 && phase <= blocks)
      for (int r = 1; r <= r_max; ++r) out.push_back({phase, r});
    return out;
  }
  for (int r = 1; r <= r_max; ++r) {
    int rem = phase - span * (r - 1);
    if (rem >= 1 && rem <= blocks) out.push_back({rem, r});
  }
  return out;
}

ScheduleTable build_zigzag(int blocks, int r_max, int span, int adus) {
  if (blocks < 1) throw std::invalid_argument("schedule needs blocks >= 1");
  if (r_max < 1) throw std::invalid_argument("schedule needs r_max >= 1");
  if (span < 0) throw std::invalid_argument("schedule needs span >= 0");
  if (adus < 1) throw std::invalid_argument("schedule needs at least one decoder unit");

  ScheduleTable table;
  table.blocks = blocks;
  table.r_max = r_max;
  table.span = span;
  table.adus = adus;

  // Each unit's work list: its phases in index order, rounds ascending inside.
  std::vector<std::vector<DrId>> queue(adus);
  const int phases = phase_count(blocks, r_max, span);
  for (int k = 1; k <= phases; ++k) {
    auto drs = phase_drs(k, blocks, r_max, span);
    auto& q = queue[(k - 1) % adus];
    q.insert(q.end(), drs.begin(), drs.end());
  }

  std::vector<std::size_t> head(adus, 0);
  // finished[b-1][r-1] = cycle the DR completed in, 0 if still pending.
  std::vector<std::vector<int>> finished(blocks, std::vector<int>(r_max, 0));
  long long remaining = static_cast<long long>(blocks) * r_max;
  int cycle = 0;
  while (remaining > 0) {
    ++cycle;
    int ran = 0;
    for (int a = 0; a < adus; ++a) {
      if (head[a] >= queue[a].size()) continue;
      DrId dr = queue[a][head[a]];
      bool ready = true;
      if (dr.round > 1) {
        int lo = std::max(1, dr.block - span);
        int hi = std::min(blocks, dr.block + span);
        for (int b = lo; b <= hi && ready; ++b) {
          int done = finished[b - 1][dr.round - 2];
          if (done == 0 || done >= cycle) ready = false;
        }
      }
      if (!ready) continue;
      finished[dr.block - 1][dr.round - 1] = cycle;
      table.entries.push_back({cycle, a, dr});
      ++head[a];
      --remaining;
      ++ran;
    }
    IBPTC_CHECK(ran > 0, "schedule made no progress");
  }
  return table;
}

std::vector<std::string> validate_schedule(const ScheduleTable& table) {
  std::vector<std::string> errors;
  auto tag = [](const DrId& dr) {
    return "(b=" + std::to_string(dr.block) + ", r=" + std::to_string(dr.round) + ")";
  };
  if (table.blocks < 1 || table.r_max < 1 || table.span < 0 || table.adus < 1) {
    errors.push_back("malformed table dimensions");
    return errors;
  }
  std::vector<std::vector<int>> cycle_of(table.blocks, std::vector<int>(table.r_max, 0));
  std::map<int, int> last_cycle_of_adu;
  for (const auto& e : table.entries) {
    if (e.dr.block < 1 || e.dr.block > table.blocks || e.dr.round < 1 ||
        e.dr.round > table.r_max) {
      errors.push_back("out-of-range dr " + tag(e.dr));
      continue;
    }
    if (e.adu < 0 || e.adu >= table.adus)
      errors.push_back("out-of-range adu " + std::to_string(e.adu) + " at dr " + tag(e.dr));
    int& slot = cycle_of[e.dr.block - 1][e.dr.round - 1];
    if (slot != 0) errors.push_back("duplicate dr " + tag(e.dr));
    slot = e.cycle;
    auto it = last_cycle_of_adu.find(e.adu);
    if (it != last_cycle_of_adu.end() && e.cycle <= it->second)
      errors.push_back("adu " + std::to_string(e.adu) + " not strictly serialized at cycle " +
                       std::to_string(e.cycle));
    last_cycle_of_adu[e.adu] = e.cycle;
  }
  for (int b = 1; b <= table.blocks; ++b)
    for (int r = 1; r <= table.r_max; ++r)
      if (cycle_of[b - 1][r - 1] == 0)
        errors.push_back("missing dr " + tag({b, r}));
  for (const auto& e : table.entries) {
    if (e.dr.round <= 1) continue;
    int lo = std::max(1, e.dr.block - table.span);
    int hi = std::min(table.blocks, e.dr.block + table.span);
    for (int b = lo; b <= hi; ++b) {
      int dep = cycle_of[b - 1][e.dr.round - 2];
      if (dep == 0) continue;  // already reported missing
      if (dep >= e.cycle)
        errors.push_back("dependency violated: " + tag(e.dr) + " at cycle " +
                         std::to_string(e.cycle) + " needs " + tag({b, e.dr.round - 1}) +
                         " in a strictly earlier cycle (got " + std::to_string(dep) + ")");
    }
  }
  return errors;
}

LatencyProfile latency_profile(const ScheduleTable& table) {
  LatencyProfile p;
  p.completion.assign(table.blocks, 0);
  for (const auto& e : table.entries)
    p.completion[e.dr.block - 1] = std::max(p.completion[e.dr.block - 1], e.cycle);
  for (int b = 0; b + 1 < table.blocks; ++b)
    p.ibdd.push_back(p.completion[b + 1] - p.completion[b]);
  p.fbdd = table.blocks > 0 ? p.completion[0] : 0;
  p.tdd = 0;
  for (int c : p.completion) p.tdd = std::max(p.tdd, c);
  return p;
}

std::vector<int> dependency_cone(int block, int iterations, int span, int num_blocks) {
  IBPTC_CHECK(block >= 1 && block <= num_blocks, "cone block out of range");
  int half = 2 * span * iterations;
  int lo = std::max(1, block - half);
  int hi = std::min(num_blocks, block + half);
  std::vector<int> out;
  for (int b = lo; b <= hi; ++b) out.push_back(b);
  return out;
}

}  // namespace ibptc
