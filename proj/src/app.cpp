#include "ibptc/app.hpp"

#include <cmath>

namespace ibptc {

namespace {

constexpr double kNegInf = -1.0e300;
constexpr double kNegInfThreshold = -1.0e150;

inline bool is_neg_inf(double v) { return v < kNegInfThreshold; }

}  // namespace

double max_star(double x, double y, MetricMode mode) {
  if (is_neg_inf(x)) return y;
  if (is_neg_inf(y)) return x;
  double m = x > y ? x : y;
  if (mode == MetricMode::max_log) return m;
  return m + std::log1p(std::exp(-std::abs(x - y)));
}

AppResult app_decode(const AppInput& in) {
  IBPTC_CHECK(in.trellis != nullptr, "app_decode needs a trellis");
  const TrellisSpec& tr = *in.trellis;
  const int L = static_cast<int>(in.systematic.size());
  if (L == 0) throw std::invalid_argument("app_decode: empty block");
  if (in.parity.size() != in.systematic.size() || in.apriori.size() != in.systematic.size())
    throw std::invalid_argument("app_decode: input vectors differ in length");
  for (int t = 0; t < L; ++t) {
    if (!std::isfinite(in.systematic[t]) || !std::isfinite(in.parity[t]) ||
        !std::isfinite(in.apriori[t]))
      throw std::invalid_argument("app_decode: non-finite input LLR");
  }
  const int S = tr.num_states();
  const MetricMode mode = in.metric;
  const bool zero_tail = in.termination == TrellisTermination::zero_tail_padded;
  const int tail_from = zero_tail ? (L > tr.nu ? L - tr.nu : 0) : L;

  // Branch metric components; bit value 0 contributes 0 by convention.
  std::vector<double> m_in(L), m_par(L);
  for (int t = 0; t < L; ++t) {
    m_in[t] = -(in.systematic[t] + in.apriori[t]);
    m_par[t] = -in.parity[t];
  }
  auto gamma = [&](int t, int s, int u) {
    double g = u ? m_in[t] : 0.0;
    if (tr.parity_out[s][u]) g += m_par[t];
    return g;
  };

  // Forward: state 0 certain at t = 0.
  std::vector<double> alpha(static_cast<std::size_t>(L + 1) * S, kNegInf);
  alpha[0] = 0.0;
  for (int t = 0; t < L; ++t) {
    double* cur = &alpha[static_cast<std::size_t>(t) * S];
    double* nxt = &alpha[static_cast<std::size_t>(t + 1) * S];
    for (int s = 0; s < S; ++s) {
      if (is_neg_inf(cur[s])) continue;
      for (int u = 0; u < 2; ++u) {
        int ns = tr.next_state[s][u];
        nxt[ns] = max_star(nxt[ns], cur[s] + gamma(t, s, u), mode);
      }
    }
    double m = kNegInf;
    for (int s = 0; s < S; ++s) m = nxt[s] > m ? nxt[s] : m;
    for (int s = 0; s < S; ++s)
      if (!is_neg_inf(nxt[s])) nxt[s] -= m;
  }

  // Backward: uniform at t = L; in zero-tail mode the last nu steps admit
  // only the 0-input branches.
  std::vector<double> beta(static_cast<std::size_t>(L + 1) * S, kNegInf);
  for (int s = 0; s < S; ++s) beta[static_cast<std::size_t>(L) * S + s] = 0.0;
  for (int t = L - 1; t >= 0; --t) {
    const double* nxt = &beta[static_cast<std::size_t>(t + 1) * S];
    double* cur = &beta[static_cast<std::size_t>(t) * S];
    const int u_max = (t >= tail_from) ? 0 : 1;
    for (int s = 0; s < S; ++s) {
      double acc = kNegInf;
      for (int u = 0; u <= u_max; ++u) {
        int ns = tr.next_state[s][u];
        if (is_neg_inf(nxt[ns])) continue;
        acc = max_star(acc, gamma(t, s, u) + nxt[ns], mode);
      }
      cur[s] = acc;
    }
    double m = kNegInf;
    for (int s = 0; s < S; ++s) m = cur[s] > m ? cur[s] : m;
    IBPTC_CHECK(!is_neg_inf(m), "backward recursion lost all paths");
    for (int s = 0; s < S; ++s)
      if (!is_neg_inf(cur[s])) cur[s] -= m;
  }

  AppResult out;
  out.posterior.resize(L);
  out.extrinsic.resize(L);
  for (int t = 0; t < L; ++t) {
    const double* a = &alpha[static_cast<std::size_t>(t) * S];
    const double* b = &beta[static_cast<std::size_t>(t + 1) * S];
    double num = kNegInf, den = kNegInf;
    for (int s = 0; s < S; ++s) {
      if (is_neg_inf(a[s])) continue;
      {
        int ns = tr.next_state[s][0];
        if (!is_neg_inf(b[ns])) num = max_star(num, a[s] + gamma(t, s, 0) + b[ns], mode);
      }
      {
        int ns = tr.next_state[s][1];
        if (!is_neg_inf(b[ns])) den = max_star(den, a[s] + gamma(t, s, 1) + b[ns], mode);
      }
    }
    IBPTC_CHECK(!is_neg_inf(num) || !is_neg_inf(den), "posterior lost all paths");
    double post;
    if (is_neg_inf(den)) {
      post = 2.0 * kLlrMax;  // only the 0 hypothesis survives (zero-tail positions)
    } else if (is_neg_inf(num)) {
      post = -2.0 * kLlrMax;
    } else {
      post = num - den;
    }
    double ext = post - in.systematic[t] - in.apriori[t];
    double recomposed = in.systematic[t] + in.apriori[t] + ext;
    IBPTC_CHECK(std::abs(recomposed - post) <= 1e-9 * std::max(1.0, std::abs(post)),
                "extrinsic decomposition drifted");
    out.posterior[t] = saturate_llr(post);
    out.extrinsic[t] = saturate_llr(ext);
  }
  return out;
}

}  // namespace ibptc
