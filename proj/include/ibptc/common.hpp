#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ibptc {

using Bit = std::uint8_t;
using BitVec = std::vector<Bit>;

// "110011011" -> {1,1,0,0,1,1,0,1,1}; throws on characters outside {0,1}.
BitVec parse_bits(const std::string& s);
std::string format_bits(const BitVec& v);

[[noreturn]] void check_fail(const char* expr, const std::string& msg);

// Always-on invariant check; violations mean a bug, not bad user input.
#define IBPTC_CHECK(cond, msg)                        \
  do {                                                \
    if (!(cond)) ::ibptc::check_fail(#cond, (msg));   \
  } while (0)

}  // namespace ibptc
