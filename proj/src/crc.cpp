#include "ibptc/crc.hpp"

namespace ibptc {

CrcSpec CrcSpec::from_string(const std::string& taps) {
  CrcSpec spec{parse_bits(taps)};
  if (spec.generator.size() < 2)
    throw std::invalid_argument("crc generator needs degree >= 1: " + taps);
  if (spec.generator.front() != 1 || spec.generator.back() != 1)
    throw std::invalid_argument("crc generator must start and end with 1: " + taps);
  return spec;
}

namespace {

// MSB-first long division register; generator degree is limited to 63 which
// is far beyond any practical CRC here.
struct Divider {
  std::uint64_t poly;  // generator without its leading coefficient
  std::uint64_t top;   // mask of the register's highest bit
  int k;

  explicit Divider(const CrcSpec& spec) {
    k = spec.parity_bits();
    if (k >= 64) throw std::invalid_argument("crc generator too long");
    poly = 0;
    for (int i = 1; i <= k; ++i)
      poly = (poly << 1) | static_cast<std::uint64_t>(spec.generator[i]);
    top = k ? (std::uint64_t{1} << (k - 1)) : 0;
  }

  std::uint64_t feed(std::uint64_t reg, Bit bit) const {
    bool carry = (reg & top) != 0;
    reg = ((reg << 1) | bit) & ((k < 64 ? (std::uint64_t{1} << k) : 0) - 1);
    if (carry) reg ^= poly;
    return reg;
  }
};

}  // namespace

BitVec crc_parity(const CrcSpec& spec, const BitVec& data) {
  if (data.empty()) throw std::invalid_argument("crc data block is empty");
  Divider div(spec);
  std::uint64_t reg = 0;
  for (Bit b : data) reg = div.feed(reg, b);
  for (int i = 0; i < div.k; ++i) reg = div.feed(reg, 0);
  BitVec parity(div.k);
  for (int i = 0; i < div.k; ++i)
    parity[i] = static_cast<Bit>((reg >> (div.k - 1 - i)) & 1u);
  return parity;
}

BitVec crc_encode(const CrcSpec& spec, const BitVec& data) {
  BitVec word = data;
  BitVec parity = crc_parity(spec, data);
  word.insert(word.end(), parity.begin(), parity.end());
  return word;
}

bool crc_check(const CrcSpec& spec, const BitVec& word) {
  if (static_cast<int>(word.size()) < spec.parity_bits() + 1)
    throw std::invalid_argument("crc word shorter than the generator");
  Divider div(spec);
  std::uint64_t reg = 0;
  for (Bit b : word) reg = div.feed(reg, b);
  return reg == 0;
}

}  // namespace ibptc
