#include "ibptc/sim.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "ibptc/channel.hpp"

namespace ibptc {

PointStats run_point(const RunConfig& cfg, double ebn0_db, std::size_t point_index) {
  const auto t0 = std::chrono::steady_clock::now();
  const CodeConfig code = normalize_code(cfg.code);
  const int payload_len = code.payload_len();
  const int B = cfg.blocks_per_run;

  // Substream pair per sweep point: even for data, odd for noise.
  const std::uint64_t data_key = splitmix64(cfg.seed, 2 * point_index);
  std::vector<BitVec> payload(B, BitVec(payload_len));
  for (int i = 0; i < B; ++i)
    for (int j = 0; j < payload_len; ++j)
      payload[i][j] = bit_sample(data_key, static_cast<std::uint64_t>(i) * payload_len + j);

  EncodedStream enc = encode_stream(payload, code);
  ChannelConfig ch;
  ch.ebn0_db = ebn0_db;
  ch.seed = cfg.seed;
  ch.stream_id = 2 * point_index + 1;
  ChannelLlrs y = transmit(enc, ch);

  DecodeResult res = cfg.mode == "ctc" ? decode_ctc(y, code, cfg.dec, &enc.w)
                                       : decode_stream(y, code, cfg.dec, &enc.w);

  PointStats st;
  st.ebn0_db = ebn0_db;
  st.mu_high_water = res.mu_high_water;
  st.total_drs = res.total_drs;
  std::vector<TerminationKind> kinds;
  std::vector<bool> correct;
  for (const BlockRecord& rec : res.blocks) {
    st.blocks += 1;
    st.bits += payload_len;
    const BitVec& truth = enc.w[rec.id - 1];
    long long errs = 0;
    for (int j = 0; j < payload_len; ++j)
      if (rec.decisions[j] != truth[j]) ++errs;
    st.bit_errors += errs;
    if (errs > 0) st.block_errors += 1;
    if (errs > 0 && tt_approved(rec.kind)) st.undetected_block_errors += 1;
    if (rec.kind == TerminationKind::forced || rec.kind == TerminationKind::dr_limit)
      st.forced_blocks += 1;
    kinds.push_back(rec.kind);
    correct.push_back(errs == 0);
  }
  st.incorrect_terminations = false_termination_audit(kinds, correct).incorrect_terminations;
  st.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                   .count();
  return st;
}

std::vector<PointStats> run_ber(const RunConfig& cfg) {
  const std::size_t n = cfg.sweep.size();
  std::vector<PointStats> out(n);
  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n ? n : 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = run_point(cfg, cfg.sweep[i], i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        out[i] = run_point(cfg, cfg.sweep[i], i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

std::string ber_csv(const std::vector<PointStats>& points) {
  std::string csv = csv_header() + "\n";
  for (const PointStats& p : points) csv += csv_row(p) + "\n";
  return csv;
}

nlohmann::json ber_summary(const RunConfig& cfg, const std::vector<PointStats>& points) {
  nlohmann::json j;
  j["rng"] = kRngName;
  j["config"] = config_to_json(cfg);
  nlohmann::json rows = nlohmann::json::array();
  for (const PointStats& p : points) {
    Wilson ber_ci = wilson_interval(p.bit_errors, p.bits);
    Wilson bler_ci = wilson_interval(p.block_errors, p.blocks);
    nlohmann::json row;
    row["ebn0_db"] = p.ebn0_db;
    row["ber"] = p.ber();
    row["ber_wilson_lo"] = ber_ci.lo;
    row["ber_wilson_hi"] = ber_ci.hi;
    row["bler"] = p.bler();
    row["bler_wilson_lo"] = bler_ci.lo;
    row["bler_wilson_hi"] = bler_ci.hi;
    row["undetected_bler"] = p.undetected_bler();
    row["avg_dr"] = p.avg_dr();
    row["forced_et_frac"] = p.forced_frac();
    row["incorrect_terminations"] = p.incorrect_terminations;
    row["mu_high_water"] = p.mu_high_water;
    row["bits"] = p.bits;
    row["blocks"] = p.blocks;
    row["wall_ms"] = p.wall_ms;
    rows.push_back(row);
  }
  j["points"] = rows;
  return j;
}

LatencyReport run_latency(const RunConfig& cfg) {
  const CodeConfig code = normalize_code(cfg.code);
  const int B = cfg.blocks_per_run;
  const int R = cfg.dec.r_max();
  LatencyReport rep;
  rep.ibptc = latency_profile(build_zigzag(B, R, code.ibpi.span, cfg.dec.m_d));
  rep.ctc = latency_profile(build_zigzag(B, R, 0, cfg.dec.m_d));
  return rep;
}

std::string latency_csv(const LatencyProfile& profile) {
  std::string csv;
  csv += "# fbdd," + std::to_string(profile.fbdd) + "\n";
  csv += "# tdd," + std::to_string(profile.tdd) + "\n";
  csv += "block,completion_cycle\n";
  for (std::size_t b = 0; b < profile.completion.size(); ++b)
    csv += std::to_string(b + 1) + "," + std::to_string(profile.completion[b]) + "\n";
  return csv;
}

}  // namespace ibptc
