#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "ibptc/app.hpp"
#include "ibptc/channel.hpp"

using namespace ibptc;

namespace {

constexpr long double kBruteNegInf = -1.0e300L;

long double brute_combine(long double acc, long double x, MetricMode mode) {
  if (acc <= kBruteNegInf) return x;
  if (x <= kBruteNegInf) return acc;
  long double m = acc > x ? acc : x;
  if (mode == MetricMode::max_log) return m;
  return m + std::log1p(std::exp(-(acc > x ? acc - x : x - acc)));
}

// Exhaustive reference: enumerates every input sequence, scores it with the
// same branch metric the decoder uses, and marginalizes per position. In
// zero-tail mode only the suffix constraint applies to a given position,
// because the decoder restricts the backward recursion but not the forward
// one.
AppResult brute_app(const AppInput& in) {
  const TrellisSpec& tr = *in.trellis;
  const int L = static_cast<int>(in.systematic.size());
  const bool zero_tail = in.termination == TrellisTermination::zero_tail_padded;
  const int tail_from = zero_tail ? (L > tr.nu ? L - tr.nu : 0) : L;

  std::vector<double> m_in(L), m_par(L);
  for (int t = 0; t < L; ++t) {
    m_in[t] = -(in.systematic[t] + in.apriori[t]);
    m_par[t] = -in.parity[t];
  }

  AppResult out;
  out.posterior.resize(L);
  out.extrinsic.resize(L);
  for (int t = 0; t < L; ++t) {
    long double num = kBruteNegInf, den = kBruteNegInf;
    const int constrained_from = std::max(t + 1, tail_from);
    for (std::uint32_t mask = 0; mask < (1u << L); ++mask) {
      bool allowed = true;
      for (int k = constrained_from; k < L; ++k)
        if ((mask >> k) & 1u) { allowed = false; break; }
      if (!allowed) continue;
      long double metric = 0.0L;
      int s = 0;
      for (int k = 0; k < L; ++k) {
        int u = (mask >> k) & 1u;
        if (u) metric += m_in[k];
        if (tr.parity_out[s][u]) metric += m_par[k];
        s = tr.next_state[s][u];
      }
      if ((mask >> t) & 1u)
        den = brute_combine(den, metric, in.metric);
      else
        num = brute_combine(num, metric, in.metric);
    }
    long double post;
    if (den <= kBruteNegInf)
      post = 2.0L * kLlrMax;
    else if (num <= kBruteNegInf)
      post = -2.0L * kLlrMax;
    else
      post = num - den;
    out.posterior[t] = saturate_llr(static_cast<double>(post));
    out.extrinsic[t] =
        saturate_llr(static_cast<double>(post - in.systematic[t] - in.apriori[t]));
  }
  return out;
}

std::vector<double> random_llrs(std::uint64_t key, std::uint64_t salt, int n, double scale) {
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = scale * gaussian_sample(key, salt * 4099 + j);
  return v;
}

void compare(const AppResult& got, const AppResult& want, double tol) {
  REQUIRE(got.posterior.size() == want.posterior.size());
  for (std::size_t t = 0; t < want.posterior.size(); ++t) {
    CHECK(std::abs(got.posterior[t] - want.posterior[t]) <=
          tol * std::max(1.0, std::abs(want.posterior[t])));
    CHECK(std::abs(got.extrinsic[t] - want.extrinsic[t]) <=
          tol * std::max(1.0, std::abs(want.extrinsic[t])));
  }
}

}  // namespace

TEST_CASE("max_star implements the jacobian logarithm") {
  CHECK(max_star(2.0, 2.0, MetricMode::log_map) == doctest::Approx(2.0 + std::log(2.0)));
  CHECK(max_star(1.0, 2.5, MetricMode::log_map) ==
        doctest::Approx(2.5 + std::log1p(std::exp(-1.5))));
  CHECK(max_star(1.0, 2.5, MetricMode::log_map) ==
        doctest::Approx(max_star(2.5, 1.0, MetricMode::log_map)));
  CHECK(max_star(3.0, -2.0, MetricMode::max_log) == 3.0);
  // The sentinel for "no path" must act as an identity element.
  CHECK(max_star(-1.0e300, 5.0, MetricMode::log_map) == 5.0);
  CHECK(max_star(5.0, -1.0e300, MetricMode::max_log) == 5.0);
  for (double x : {-4.0, 0.0, 1.25}) {
    for (double y : {-1.0, 0.5, 7.0}) {
      double exact = max_star(x, y, MetricMode::log_map);
      double approx = max_star(x, y, MetricMode::max_log);
      CHECK(exact >= approx);
      CHECK(exact - approx <= std::log(2.0) + 1e-12);
    }
  }
}

TEST_CASE("single step block has a closed form") {
  // With one trellis step both hypotheses are single paths, so the posterior
  // is sys + apriori + parity and the extrinsic is the parity term alone.
  TrellisSpec tr = TrellisSpec::default_8state();
  AppInput in;
  in.systematic = {1.5};
  in.parity = {0.5};
  in.apriori = {0.25};
  in.trellis = &tr;
  AppResult r = app_decode(in);
  CHECK(r.posterior[0] == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(r.extrinsic[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("matches exhaustive marginalization on random blocks") {
  TrellisSpec tr = TrellisSpec::default_8state();
  std::uint64_t key = 0xa99;
  for (int trial = 0; trial < 30; ++trial) {
    int L = 1 + static_cast<int>(splitmix64(key, 900 + trial) % 10);
    double scale = (trial % 5 == 0) ? 20.0 : 2.5;  // occasionally stress saturation
    AppInput in;
    in.systematic = random_llrs(key, 3 * trial, L, scale);
    in.parity = random_llrs(key, 3 * trial + 1, L, scale);
    in.apriori = random_llrs(key, 3 * trial + 2, L, 1.0);
    in.trellis = &tr;
    for (MetricMode metric : {MetricMode::log_map, MetricMode::max_log}) {
      for (TrellisTermination term :
           {TrellisTermination::open, TrellisTermination::zero_tail_padded}) {
        in.metric = metric;
        in.termination = term;
        compare(app_decode(in), brute_app(in), 1e-9);
      }
    }
  }
}

TEST_CASE("outputs stay inside the llr clamp") {
  TrellisSpec tr = TrellisSpec::default_8state();
  AppInput in;
  in.systematic = random_llrs(7, 0, 40, 30.0);
  in.parity = random_llrs(7, 1, 40, 30.0);
  in.apriori = random_llrs(7, 2, 40, 10.0);
  in.trellis = &tr;
  AppResult r = app_decode(in);
  bool hit_cap = false;
  for (int t = 0; t < 40; ++t) {
    CHECK(std::abs(r.posterior[t]) <= kLlrMax);
    CHECK(std::abs(r.extrinsic[t]) <= kLlrMax);
    if (std::abs(r.posterior[t]) == kLlrMax) hit_cap = true;
  }
  CHECK(hit_cap);  // scale 30 noise should pin at least one position
}

TEST_CASE("termination mode reaches the recursion") {
  TrellisSpec tr = TrellisSpec::default_8state();
  AppInput in;
  in.systematic = random_llrs(0x7a11, 5, 9, 2.0);
  in.parity = random_llrs(0x7a11, 6, 9, 2.0);
  in.apriori.assign(9, 0.0);
  in.trellis = &tr;
  in.termination = TrellisTermination::open;
  AppResult open = app_decode(in);
  in.termination = TrellisTermination::zero_tail_padded;
  AppResult tail = app_decode(in);
  double max_diff = 0.0;
  for (int t = 0; t < 9; ++t)
    max_diff = std::max(max_diff, std::abs(open.posterior[t] - tail.posterior[t]));
  CHECK(max_diff > 1e-9);  // constraining the suffix must change something
}

TEST_CASE("no evidence means no opinion") {
  TrellisSpec tr = TrellisSpec::default_8state();
  AppInput in;
  in.systematic.assign(12, 0.0);
  in.parity.assign(12, 0.0);
  in.apriori.assign(12, 0.0);
  in.trellis = &tr;
  AppResult open = app_decode(in);
  for (int t = 0; t < 12; ++t) CHECK(open.posterior[t] == 0.0);
}

TEST_CASE("input validation") {
  TrellisSpec tr = TrellisSpec::default_8state();
  AppInput in;
  in.trellis = &tr;
  in.systematic = {};
  in.parity = {};
  in.apriori = {};
  CHECK_THROWS_AS(app_decode(in), std::invalid_argument);

  in.systematic = {1.0, 2.0};
  in.parity = {1.0};
  in.apriori = {0.0, 0.0};
  CHECK_THROWS_AS(app_decode(in), std::invalid_argument);

  in.parity = {1.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(app_decode(in), std::invalid_argument);
  in.parity = {1.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(app_decode(in), std::invalid_argument);

  in.parity = {1.0, 2.0};
  in.trellis = nullptr;
  CHECK_THROWS_AS(app_decode(in), std::logic_error);
}
