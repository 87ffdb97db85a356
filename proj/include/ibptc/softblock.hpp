#pragma once

#include <algorithm>
#include <cmath>

#include "ibptc/common.hpp"

namespace ibptc {

// Natural-log LLR convention: positive means bit 0. Everything emitted by the
// decoders is clamped to [-kLlrMax, kLlrMax]; the saturated extreme doubles as
// the "decided bit" value injected for terminated blocks.
inline constexpr double kLlrMax = 50.0;

inline double saturate_llr(double v) { return std::clamp(v, -kLlrMax, kLlrMax); }

enum class Orientation { pre_permuted, post_permuted };

struct SoftBlock {
  std::vector<double> llr;
  Orientation orientation = Orientation::pre_permuted;
};

// LLR > 0 -> 0, LLR < 0 -> 1, LLR == 0 -> 0 (documented tie-break).
inline BitVec hard_decide(const std::vector<double>& llr) {
  BitVec bits(llr.size());
  for (std::size_t i = 0; i < llr.size(); ++i) bits[i] = llr[i] < 0.0 ? 1 : 0;
  return bits;
}

inline BitVec hard_decide(const SoftBlock& soft) { return hard_decide(soft.llr); }

}  // namespace ibptc
