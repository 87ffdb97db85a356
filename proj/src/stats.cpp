#include "ibptc/stats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace ibptc {

Wilson wilson_interval(long long successes, long long trials, double z) {
  Wilson w;
  if (trials <= 0) return w;  // no evidence: the full unit interval
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  w.lo = center - half;
  w.hi = center + half;
  if (w.lo < 0.0) w.lo = 0.0;
  if (w.hi > 1.0) w.hi = 1.0;
  return w;
}

bool intervals_overlap(const Wilson& a, const Wilson& b) {
  return a.lo <= b.hi && b.lo <= a.hi;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec == std::errc{}) return std::string(buf, res.ptr);
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_header() {
  return "ebn0_db,ber,bler,undetected_bler,avg_dr,forced_et_frac,mu_high_water,bits,blocks";
}

std::string csv_row(const PointStats& p) {
  std::string row = format_double(p.ebn0_db);
  row += "," + format_double(p.ber());
  row += "," + format_double(p.bler());
  row += "," + format_double(p.undetected_bler());
  row += "," + format_double(p.avg_dr());
  row += "," + format_double(p.forced_frac());
  row += "," + std::to_string(p.mu_high_water);
  row += "," + std::to_string(p.bits);
  row += "," + std::to_string(p.blocks);
  return row;
}

}  // namespace ibptc
