#pragma once

#include <cstdint>
#include <string>

namespace ibptc {

struct Wilson {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for a binomial proportion; z defaults to 95%.
Wilson wilson_interval(long long successes, long long trials, double z = 1.959964);

// True when [a.lo, a.hi] and [b.lo, b.hi] intersect.
bool intervals_overlap(const Wilson& a, const Wilson& b);

struct PointStats {
  double ebn0_db = 0.0;
  long long bit_errors = 0;
  long long bits = 0;
  long long block_errors = 0;
  long long undetected_block_errors = 0;
  long long blocks = 0;
  long long total_drs = 0;
  long long forced_blocks = 0;  // forced + dr_limit kinds
  long long incorrect_terminations = 0;
  int mu_high_water = 0;
  double wall_ms = 0.0;

  double ber() const { return bits ? static_cast<double>(bit_errors) / bits : 0.0; }
  double bler() const { return blocks ? static_cast<double>(block_errors) / blocks : 0.0; }
  double undetected_bler() const {
    return blocks ? static_cast<double>(undetected_block_errors) / blocks : 0.0;
  }
  double avg_dr() const { return blocks ? static_cast<double>(total_drs) / blocks : 0.0; }
  double forced_frac() const {
    return blocks ? static_cast<double>(forced_blocks) / blocks : 0.0;
  }
};

// Fixed schema; numeric formatting is locale-independent and byte-stable.
std::string csv_header();
std::string csv_row(const PointStats& p);

// Locale-independent float formatting used across all emitters.
std::string format_double(double v);

}  // namespace ibptc
