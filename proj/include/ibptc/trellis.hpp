#pragma once

#include <array>
#include <utility>

#include "ibptc/common.hpp"

namespace ibptc {

// Recursive systematic convolutional code with transfer [1, ff(D)/fb(D)].
// Polynomials are bit strings MSB-first ("1011" = D^3 + D + 1); both must
// have constant term 1. State bit i-1 holds the feedback-node value from
// i steps ago, so state 0 is the all-zero register.
struct TrellisSpec {
  BitVec feedback;     // denominator, MSB-first
  BitVec feedforward;  // numerator, MSB-first
  int nu = 0;
  std::vector<std::array<int, 2>> next_state;  // [state][input]
  std::vector<std::array<Bit, 2>> parity_out;  // [state][input]

  int num_states() const { return 1 << nu; }

  static TrellisSpec from_strings(const std::string& fb, const std::string& ff);

  // Eight-state rate-1/2 component: feedback 1+D+D^3, feedforward 1+D^2+D^3.
  static TrellisSpec default_8state();
};

// Runs the register over the input from the given state; returns the parity
// sequence and the final state. No termination tail is appended.
std::pair<BitVec, int> rsc_encode(const BitVec& input, const TrellisSpec& trellis,
                                  int initial_state = 0);

}  // namespace ibptc
