#include "ibptc/common.hpp"

namespace ibptc {

BitVec parse_bits(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("bit string is empty");
  BitVec v;
  v.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("bit string has non-binary character: " + s);
    v.push_back(static_cast<Bit>(c - '0'));
  }
  return v;
}

std::string format_bits(const BitVec& v) {
  std::string s;
  s.reserve(v.size());
  for (Bit b : v) s.push_back(b ? '1' : '0');
  return s;
}

void check_fail(const char* expr, const std::string& msg) {
  throw std::logic_error("invariant violated: " + std::string(expr) + " (" + msg + ")");
}

}  // namespace ibptc
