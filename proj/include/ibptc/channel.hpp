#pragma once

#include <cstdint>

#include "ibptc/common.hpp"

namespace ibptc {

// Counter-based generator: every draw is a pure function of (seed, stream,
// index), so any sample can be produced independently of order or thread
// count. Algorithm name recorded in run summaries.
inline constexpr const char* kRngName = "splitmix64-counter + box-muller";

std::uint64_t splitmix64(std::uint64_t key, std::uint64_t index);

// Uniform in (0, 1].
double uniform_sample(std::uint64_t key, std::uint64_t index);

// Standard normal via Box-Muller (cosine branch); one draw per index.
double gaussian_sample(std::uint64_t key, std::uint64_t index);

// Uniform random bit.
Bit bit_sample(std::uint64_t key, std::uint64_t index);

struct ChannelConfig {
  double ebn0_db = 0.0;
  double rate = 1.0 / 3.0;      // code rate for noise scaling
  std::uint64_t seed = 1;
  std::uint64_t stream_id = 0;  // substream (e.g. sweep-point index)
};

// BPSK unit energy, bit 0 -> +1: sigma^2 = 1 / (2 * rate * 10^(EbN0/10)).
double noise_sigma2(const ChannelConfig& cfg);

// Received LLR for one coded bit at the given global sample index:
// 2y/sigma^2 with y = bpsk(bit) + noise, saturated to +-kLlrMax.
double transmit_bit(Bit bit, std::uint64_t sample_index, const ChannelConfig& cfg);

}  // namespace ibptc
