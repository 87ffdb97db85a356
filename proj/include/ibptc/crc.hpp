#pragma once

#include "ibptc/common.hpp"

namespace ibptc {

// Systematic CRC over GF(2). The generator is given MSB-first; leading and
// trailing taps must be 1.
struct CrcSpec {
  BitVec generator;

  int parity_bits() const { return static_cast<int>(generator.size()) - 1; }

  static CrcSpec from_string(const std::string& taps);
};

// Remainder of data * x^K divided by the generator (K parity bits).
BitVec crc_parity(const CrcSpec& spec, const BitVec& data);

// data followed by its parity; crc_check of the result is true.
BitVec crc_encode(const CrcSpec& spec, const BitVec& data);

// True iff the word is divisible by the generator.
bool crc_check(const CrcSpec& spec, const BitVec& word);

}  // namespace ibptc
