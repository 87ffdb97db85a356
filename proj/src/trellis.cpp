#include "ibptc/trellis.hpp"

#include <bit>

namespace ibptc {

namespace {

// Low bit of the state is the newest feedback-node value.
std::uint32_t state_mask_from_poly(const BitVec& poly_msb_first) {
  // poly bit for D^i (i >= 1) maps to state bit i-1.
  std::uint32_t mask = 0;
  int deg = static_cast<int>(poly_msb_first.size()) - 1;
  for (int i = 1; i <= deg; ++i)
    if (poly_msb_first[deg - i]) mask |= (1u << (i - 1));
  return mask;
}

}  // namespace

TrellisSpec TrellisSpec::from_strings(const std::string& fb, const std::string& ff) {
  TrellisSpec t;
  t.feedback = parse_bits(fb);
  t.feedforward = parse_bits(ff);
  if (t.feedback.size() != t.feedforward.size())
    throw std::invalid_argument("trellis polynomials must have equal degree");
  if (t.feedback.size() < 2)
    throw std::invalid_argument("trellis polynomials need degree >= 1");
  if (t.feedback.back() != 1 || t.feedforward.back() != 1)
    throw std::invalid_argument("trellis polynomials must have constant term 1");
  if (t.feedback.front() != 1 || t.feedforward.front() != 1)
    throw std::invalid_argument("trellis polynomials must have leading term 1");
  t.nu = static_cast<int>(t.feedback.size()) - 1;
  if (t.nu > 20) throw std::invalid_argument("trellis memory too large");

  const std::uint32_t fb_mask = state_mask_from_poly(t.feedback);
  const std::uint32_t ff_mask = state_mask_from_poly(t.feedforward);
  const int states = 1 << t.nu;
  const std::uint32_t reg_mask = static_cast<std::uint32_t>(states - 1);

  t.next_state.resize(states);
  t.parity_out.resize(states);
  for (int s = 0; s < states; ++s) {
    for (int u = 0; u < 2; ++u) {
      Bit w = static_cast<Bit>((u ^ std::popcount(static_cast<std::uint32_t>(s) & fb_mask)) & 1);
      Bit c = static_cast<Bit>((w ^ std::popcount(static_cast<std::uint32_t>(s) & ff_mask)) & 1);
      t.next_state[s][u] = static_cast<int>(((static_cast<std::uint32_t>(s) << 1) | w) & reg_mask);
      t.parity_out[s][u] = c;
    }
  }
  return t;
}

TrellisSpec TrellisSpec::default_8state() { return from_strings("1011", "1101"); }

std::pair<BitVec, int> rsc_encode(const BitVec& input, const TrellisSpec& trellis,
                                  int initial_state) {
  if (input.empty()) throw std::invalid_argument("rsc input is empty");
  if (initial_state < 0 || initial_state >= trellis.num_states())
    throw std::invalid_argument("rsc initial state out of range");
  BitVec parity(input.size());
  int s = initial_state;
  for (std::size_t t = 0; t < input.size(); ++t) {
    int u = input[t] & 1;
    parity[t] = trellis.parity_out[s][u];
    s = trellis.next_state[s][u];
  }
  return {parity, s};
}

}  // namespace ibptc
