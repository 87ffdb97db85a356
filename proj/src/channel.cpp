#include "ibptc/channel.hpp"

#include <cmath>

#include "ibptc/softblock.hpp"

namespace ibptc {

std::uint64_t splitmix64(std::uint64_t key, std::uint64_t index) {
  std::uint64_t z = key + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_sample(std::uint64_t key, std::uint64_t index) {
  // 53 mantissa bits, shifted into (0, 1] so log() below is safe.
  return static_cast<double>((splitmix64(key, index) >> 11) + 1) * 0x1.0p-53;
}

double gaussian_sample(std::uint64_t key, std::uint64_t index) {
  double u1 = uniform_sample(key, 2 * index);
  double u2 = uniform_sample(key, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238463 * u2);
}

Bit bit_sample(std::uint64_t key, std::uint64_t index) {
  return static_cast<Bit>(splitmix64(key, index) >> 63);
}

double noise_sigma2(const ChannelConfig& cfg) {
  return 1.0 / (2.0 * cfg.rate * std::pow(10.0, cfg.ebn0_db / 10.0));
}

double transmit_bit(Bit bit, std::uint64_t sample_index, const ChannelConfig& cfg) {
  const double sigma2 = noise_sigma2(cfg);
  const std::uint64_t key = splitmix64(cfg.seed, cfg.stream_id);
  double y = (bit ? -1.0 : 1.0) + std::sqrt(sigma2) * gaussian_sample(key, sample_index);
  return saturate_llr(2.0 * y / sigma2);
}

}  // namespace ibptc
