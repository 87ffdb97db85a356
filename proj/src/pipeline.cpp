#include "ibptc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ibptc {

CodeConfig normalize_code(CodeConfig code) {
  if (code.block_len < 1) throw std::invalid_argument("block_len must be >= 1");
  if (code.crc.generator.empty()) code.crc = CrcSpec::from_string("110011011");
  if (code.trellis.next_state.empty()) {
    if (!code.trellis.feedback.empty() || !code.trellis.feedforward.empty())
      throw std::invalid_argument("trellis polynomials present but tables not built");
    code.trellis = TrellisSpec::default_8state();
  }
  if (code.ctc_mode) code.ibpi.span = 0;
  if (code.ibpi.span < 0) throw std::invalid_argument("span must be >= 0");
  if (code.ibpi.period < 2 * code.ibpi.span + 1)
    throw std::invalid_argument("period must be at least 2*span+1");
  if (code.ibpi.block_len == 0) code.ibpi.block_len = code.block_len;
  if (code.ibpi.block_len != code.block_len)
    throw std::invalid_argument("ibpi block_len disagrees with code block_len");
  if (code.ibpi.intra.block_len == 0) code.ibpi.intra.block_len = code.block_len;
  if (code.ibpi.intra.block_len != code.block_len)
    throw std::invalid_argument("intra block_len disagrees with code block_len");
  if (code.data_len() < 1) throw std::invalid_argument("block too short for its CRC");
  if (code.payload_len() < 1) throw std::invalid_argument("block too short for CRC plus tail");
  return code;
}

EncodedStream encode_stream(const std::vector<BitVec>& payload, const CodeConfig& raw) {
  CodeConfig code = normalize_code(raw);
  const int B = static_cast<int>(payload.size());
  if (B < 1) throw std::invalid_argument("encode_stream needs at least one block");
  const int L = code.block_len;
  const int nu = code.tail_padding ? code.trellis.nu : 0;

  EncodedStream out;
  out.w.resize(B);
  out.z2.resize(B);
  out.z3.resize(B);
  for (int i = 0; i < B; ++i) {
    if (static_cast<int>(payload[i].size()) != code.payload_len())
      throw std::invalid_argument("payload block has wrong length");
    BitVec data = payload[i];
    data.insert(data.end(), nu, Bit{0});
    out.w[i] = crc_encode(code.crc, data);
    IBPTC_CHECK(static_cast<int>(out.w[i].size()) == L, "systematic block length mismatch");
    out.z2[i] = rsc_encode(out.w[i], code.trellis).first;
  }

  IbpiMapping map = build_ibpi(code.ibpi);
  std::vector<BitVec> permuted(B, BitVec(L, 0));
  for (int i = 0; i < B; ++i) {
    for (int j = 0; j < L; ++j) {
      BlockPos dst = map.forward(i + 1, j, B);
      permuted[dst.block - 1][dst.pos] = out.w[i][j];
    }
  }
  for (int k = 0; k < B; ++k) out.z3[k] = rsc_encode(permuted[k], code.trellis).first;
  return out;
}

ChannelLlrs transmit(const EncodedStream& z, const ChannelConfig& cfg) {
  const int B = static_cast<int>(z.w.size());
  IBPTC_CHECK(B >= 1 && z.z2.size() == z.w.size() && z.z3.size() == z.w.size(),
              "encoded stream is incomplete");
  const std::uint64_t L = z.w.empty() ? 0 : z.w[0].size();
  ChannelLlrs y;
  y.y1.resize(B);
  y.y2.resize(B);
  y.y3.resize(B);
  for (int b = 0; b < B; ++b) {
    IBPTC_CHECK(z.w[b].size() == L && z.z2[b].size() == L && z.z3[b].size() == L,
                "encoded block length mismatch");
    y.y1[b].resize(L);
    y.y2[b].resize(L);
    y.y3[b].resize(L);
    const std::uint64_t base = static_cast<std::uint64_t>(b) * 3 * L;
    for (std::uint64_t j = 0; j < L; ++j) {
      y.y1[b][j] = transmit_bit(z.w[b][j], base + j, cfg);
      y.y2[b][j] = transmit_bit(z.z2[b][j], base + L + j, cfg);
      y.y3[b][j] = transmit_bit(z.z3[b][j], base + 2 * L + j, cfg);
    }
  }
  return y;
}

namespace {

// Cycle-synchronous executor for one stream. All state mutation happens on
// the calling thread, in ADU-id order within a cycle, so a decode is a pure
// function of its inputs.
class StreamDecoder {
 public:
  StreamDecoder(const ChannelLlrs& y, const CodeConfig& code, const DecoderConfig& dec,
                const std::vector<BitVec>* truth)
      : code_(normalize_code(code)),
        dec_(dec),
        map_(build_ibpi(code_.ibpi)),
        B_(static_cast<int>(y.y1.size())),
        L_(code_.block_len),
        y2_(y.y2),
        y3_(y.y3),
        truth_(truth),
        ledger_(dec.m_max, 3, map_.span(), std::max(1, static_cast<int>(y.y1.size()))) {
    if (dec_.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (dec_.d_max < 1) throw std::invalid_argument("d_max must be >= 1");
    if (dec_.m_d < 1) throw std::invalid_argument("m_d must be >= 1");
    if (B_ < 1) throw std::invalid_argument("decode_stream needs at least one block");
    if (y.y2.size() != y.y1.size() || y.y3.size() != y.y1.size())
      throw std::invalid_argument("channel streams disagree on block count");
    for (int b = 0; b < B_; ++b)
      if (static_cast<int>(y.y1[b].size()) != L_ || static_cast<int>(y.y2[b].size()) != L_ ||
          static_cast<int>(y.y3[b].size()) != L_)
        throw std::invalid_argument("channel block length disagrees with block_len");
    if (truth_ && static_cast<int>(truth_->size()) != B_)
      throw std::invalid_argument("truth stream has wrong block count");
    R_ = dec_.r_max();
    cap_ = dec_.effective_cap();
    if ((dec_.tt.family == TtFamily::crc || dec_.tt.family == TtFamily::hybrid) &&
        dec_.tt.crc.generator.empty())
      dec_.tt.crc = code_.crc;

    // Decoder-side prior: tail-padded data bits are known zeros, so their
    // systematic LLRs are pinned before any DR runs.
    y1_ = y.y1;
    if (code_.tail_padding && code_.trellis.nu > 0) {
      int dl = code_.data_len();
      for (int b = 0; b < B_; ++b)
        for (int j = dl - code_.trellis.nu; j < dl; ++j) y1_[b][j] = kLlrMax;
    }

    ext_.resize(B_);
    kinds_.assign(B_, TerminationKind::none);
    hardened_.assign(B_, false);
    tts_.resize(B_);
    dr_count_.assign(B_, 0);
    completion_.assign(B_, 0);
    next_content_.assign(B_, 2);
    decisions_.resize(B_);
    slot_status_.assign(static_cast<std::size_t>(B_) * R_, 0);
    slot_cycle_.assign(static_cast<std::size_t>(B_) * R_, 0);
  }

  DecodeResult run() {
    build_queues();
    const long long total_slots = static_cast<long long>(B_) * R_;
    long long remaining = total_slots;
    cycle_ = 0;
    while (remaining > 0) {
      ++cycle_;
      int ran = 0;
      for (int a = 0; a < static_cast<int>(queue_.size()); ++a) {
        while (head_[a] < queue_[a].size()) {
          DrId dr = queue_[a][head_[a]];
          if (deleted(dr)) {
            mark_slot(dr, 2);
            ++head_[a];
            --remaining;
            after_slot(dr);
            continue;  // skipping costs no cycle
          }
          if (!deps_ready(dr)) break;  // stall until a strictly earlier cycle supplies deps
          execute(dr);
          mark_slot(dr, 1);
          ++head_[a];
          --remaining;
          ++ran;
          after_slot(dr);
          break;  // one DR per ADU per cycle
        }
      }
      IBPTC_CHECK(ran > 0 || remaining == 0, "decoder made no progress");
      if (cycle_ % 64 == 0) ledger_.verify();
    }
    finish();
    return std::move(result_);
  }

 private:
  std::size_t slot_index(const DrId& dr) const {
    return static_cast<std::size_t>(dr.block - 1) * R_ + (dr.round - 1);
  }
  void mark_slot(const DrId& dr, int8_t status) {
    slot_status_[slot_index(dr)] = status;
    slot_cycle_[slot_index(dr)] = cycle_;
  }
  bool slot_done(int block, int round) const {
    return slot_status_[static_cast<std::size_t>(block - 1) * R_ + (round - 1)] != 0;
  }

  void build_queues() {
    queue_.assign(dec_.m_d, {});
    head_.assign(dec_.m_d, 0);
    const int phases = phase_count(B_, R_, map_.span());
    for (int k = 1; k <= phases; ++k) {
      auto drs = phase_drs(k, B_, R_, map_.span());
      auto& q = queue_[(k - 1) % dec_.m_d];
      q.insert(q.end(), drs.begin(), drs.end());
    }
  }

  bool terminated(int block) const { return kinds_[block - 1] != TerminationKind::none; }

  bool window_all_terminated(int block) const {
    int lo = std::max(1, block - map_.span());
    int hi = std::min(B_, block + map_.span());
    for (int b = lo; b <= hi; ++b)
      if (!terminated(b)) return false;
    return true;
  }

  bool deleted(const DrId& dr) const {
    if (dr.orientation() == Orientation::pre_permuted) return terminated(dr.block);
    if (window_all_terminated(dr.block)) return true;  // nobody left to serve
    return terminated(dr.block) && dr_count_[dr.block - 1] >= cap_;
  }

  bool deps_ready(const DrId& dr) const {
    if (dr.round == 1) return true;
    int lo = std::max(1, dr.block - map_.span());
    int hi = std::min(B_, dr.block + map_.span());
    for (int b = lo; b <= hi; ++b) {
      std::size_t idx = static_cast<std::size_t>(b - 1) * R_ + (dr.round - 2);
      if (slot_status_[idx] == 0) return false;
      if (slot_status_[idx] == 1 && slot_cycle_[idx] >= cycle_) return false;
    }
    return true;
  }

  const BitVec* truth_block(int block) const {
    return truth_ ? &(*truth_)[block - 1] : nullptr;
  }

  BitVec snapshot_content(int block) const {
    const auto& y1 = y1_[block - 1];
    const auto& ext = ext_[block - 1];
    BitVec out(L_);
    for (int j = 0; j < L_; ++j) {
      double v = y1[j] + (ext.empty() ? 0.0 : ext[j]);
      out[j] = v < 0.0 ? 1 : 0;
    }
    return out;
  }

  std::vector<double> content_llrs(int block) const {
    std::vector<double> out = y1_[block - 1];
    const auto& ext = ext_[block - 1];
    if (!ext.empty())
      for (int j = 0; j < L_; ++j) out[j] += ext[j];
    return out;
  }

  void terminate_block(int block, TerminationKind kind, BitVec decisions) {
    IBPTC_CHECK(!terminated(block), "block terminated twice");
    IBPTC_CHECK(kind != TerminationKind::none, "termination needs a kind");
    kinds_[block - 1] = kind;
    decisions_[block - 1] = std::move(decisions);
    completion_[block - 1] = cycle_;
    if ((kind == TerminationKind::forced || kind == TerminationKind::dr_limit) &&
        dec_.policy == ForcedPolicy::harden)
      hardened_[block - 1] = true;
    switch (kind) {
      case TerminationKind::regular: ++result_.regular_count; break;
      case TerminationKind::extended: ++result_.extended_count; break;
      case TerminationKind::forced: ++result_.forced_count; break;
      case TerminationKind::dr_limit: ++result_.dr_limit_count; break;
      case TerminationKind::none: break;
    }
    ledger_.release_on_termination(block);
  }

  MemoryLedger::TerminateFn forced_terminator() {
    return [this](int block, TerminationKind kind) {
      terminate_block(block, kind, snapshot_content(block));
    };
  }

  // Reaching the DR cap discards the block exactly like a forced ET aimed at
  // it, including the policy's span handling.
  void terminate_at_limit(int block, BitVec decisions) {
    terminate_block(block, TerminationKind::dr_limit, std::move(decisions));
    if (dec_.policy == ForcedPolicy::harden) {
      for (int n = block + 1; n <= std::min(B_, block + map_.span()); ++n)
        if (!terminated(n)) terminate_block(n, TerminationKind::forced, snapshot_content(n));
    }
  }

  void execute(const DrId& dr) {
    if (dr.orientation() == Orientation::pre_permuted) execute_pre(dr);
    else execute_post(dr);
  }

  void execute_pre(const DrId& dr) {
    const int b = dr.block;
    if (dr.round == 1) ledger_.admit_block(b, dec_.policy, forced_terminator());
    if (!ledger_.ensure_dr_space(b, dec_.policy, forced_terminator())) {
      // The forced ET landed on this very block; its DR is no longer needed.
      IBPTC_CHECK(terminated(b), "ledger refused a DR for an active block");
      return;
    }
    if (ext_[b - 1].empty()) ext_[b - 1].assign(L_, 0.0);

    AppInput in;
    in.systematic = y1_[b - 1];
    in.parity = y2_[b - 1];
    in.apriori = ext_[b - 1];
    in.trellis = &code_.trellis;
    in.termination = dec_.app_termination;
    in.metric = dec_.metric;
    AppResult res = app_decode(in);

    count_dr(b);
    ext_[b - 1] = res.extrinsic;

    TtOutcome tt = tt_round(dec_.tt, tts_[b - 1], res.posterior,
                            Orientation::pre_permuted, truth_block(b));
    if (tt.consumed && should_terminate(dec_.tt, tts_[b - 1])) {
      TerminationKind kind =
          dec_.tt.family == TtFamily::fixed ? TerminationKind::dr_limit : TerminationKind::regular;
      BitVec hard = hard_decide(res.posterior);
      if (kind == TerminationKind::dr_limit) terminate_at_limit(b, std::move(hard));
      else terminate_block(b, kind, std::move(hard));
      return;
    }
    if (dr_count_[b - 1] >= cap_) terminate_at_limit(b, hard_decide(res.posterior));
  }

  void execute_post(const DrId& dr) {
    const int k = dr.block;
    const bool serving = terminated(k);
    if (!serving && !ledger_.ensure_dr_space(k, dec_.policy, forced_terminator())) {
      IBPTC_CHECK(terminated(k), "ledger refused a DR for an active block");
      return;
    }

    AppInput in;
    in.systematic.resize(L_);
    in.apriori.resize(L_);
    in.parity = y3_[k - 1];
    in.trellis = &code_.trellis;
    in.termination = dec_.app_termination;
    in.metric = dec_.metric;
    std::vector<BlockPos> owner(L_);
    for (int j = 0; j < L_; ++j) {
      BlockPos o = map_.inverse(k, j, B_);
      owner[j] = o;
      const TerminationKind ok = kinds_[o.block - 1];
      if (ok == TerminationKind::none) {
        in.systematic[j] = y1_[o.block - 1][o.pos];
        const auto& ext = ext_[o.block - 1];
        in.apriori[j] = ext.empty() ? 0.0 : ext[o.pos];
      } else if (tt_approved(ok) || hardened_[o.block - 1]) {
        double v = decisions_[o.block - 1][o.pos] ? -kLlrMax : kLlrMax;
        in.systematic[j] = v;
        in.apriori[j] = v;
      } else {
        // Frozen block: last extrinsic stays visible, channel values stay real.
        in.systematic[j] = y1_[o.block - 1][o.pos];
        const auto& ext = ext_[o.block - 1];
        in.apriori[j] = ext.empty() ? 0.0 : ext[o.pos];
      }
    }
    AppResult res = app_decode(in);

    count_dr(k);
    for (int j = 0; j < L_; ++j) {
      const BlockPos& o = owner[j];
      if (kinds_[o.block - 1] != TerminationKind::none) continue;  // frozen slots
      IBPTC_CHECK(!ext_[o.block - 1].empty(), "active owner missing its extrinsic buffer");
      ext_[o.block - 1][o.pos] = res.extrinsic[j];
    }
    if (serving) return;  // no tests for a block that already has its answer

    // Sign-style comparisons need the block's own bits in pre-permuted order;
    // the raw post posterior mixes positions that belong to the neighbours.
    const bool sign_view = dec_.tt.family == TtFamily::sign;
    std::vector<double> content;
    if (sign_view) content = content_llrs(k);
    TtOutcome tt = tt_round(dec_.tt, tts_[k - 1], sign_view ? content : res.posterior,
                            Orientation::post_permuted, truth_block(k));
    if (tt.consumed && should_terminate(dec_.tt, tts_[k - 1])) {
      TerminationKind kind =
          dec_.tt.family == TtFamily::fixed ? TerminationKind::dr_limit : TerminationKind::regular;
      BitVec hard = snapshot_content(k);
      if (kind == TerminationKind::dr_limit) terminate_at_limit(k, std::move(hard));
      else terminate_block(k, kind, std::move(hard));
      return;
    }
    if (dr_count_[k - 1] >= cap_) terminate_at_limit(k, snapshot_content(k));
  }

  void count_dr(int block) {
    ++dr_count_[block - 1];
    ++result_.total_drs;
    IBPTC_CHECK(dr_count_[block - 1] <= cap_, "block exceeded its DR cap");
  }

  // Extended termination, content side: once every post DR of round r that
  // can touch a block's pre-permuted content has executed or been skipped,
  // the refreshed content earns one extra test round without a DR.
  void after_slot(const DrId& dr) {
    if (dr.orientation() != Orientation::post_permuted) return;
    if (dec_.tt.family == TtFamily::fixed) return;
    int lo = std::max(1, dr.block - map_.span());
    int hi = std::min(B_, dr.block + map_.span());
    for (int b = lo; b <= hi; ++b) try_content(b);
  }

  void try_content(int b) {
    while (!terminated(b)) {
      int r = next_content_[b - 1];
      if (r > R_) return;
      int lo = std::max(1, b - map_.span());
      int hi = std::min(B_, b + map_.span());
      for (int k = lo; k <= hi; ++k)
        if (!slot_done(k, r)) return;
      next_content_[b - 1] += 2;
      // The scan probes a copy of the test state: scattered content gives the
      // block an extra chance to stop, never an extra way to lose its streak.
      std::vector<double> content = content_llrs(b);
      TtState probe = tts_[b - 1];
      TtOutcome tt = tt_round(dec_.tt, probe, content, Orientation::pre_permuted, truth_block(b));
      if (tt.consumed && should_terminate(dec_.tt, probe)) {
        terminate_block(b, TerminationKind::extended, hard_decide(content));
        return;
      }
    }
  }

  void finish() {
    for (int b = 1; b <= B_; ++b)
      IBPTC_CHECK(terminated(b), "stream finished with an undecided block");
    ledger_.verify();
    IBPTC_CHECK(ledger_.allocated() == 0, "stream finished with MUs still allocated");

    result_.blocks.resize(B_);
    result_.total_cycles = 0;
    result_.mu_high_water = ledger_.high_water();
    const int payload_len = code_.payload_len();
    for (int b = 1; b <= B_; ++b) {
      BlockRecord& rec = result_.blocks[b - 1];
      rec.id = b;
      rec.dr_count = dr_count_[b - 1];
      rec.kind = kinds_[b - 1];
      rec.completion_cycle = completion_[b - 1];
      rec.decisions = decisions_[b - 1];
      rec.crc_ok = crc_check(code_.crc, rec.decisions);
      if (truth_) {
        rec.payload_correct =
            std::equal(rec.decisions.begin(), rec.decisions.begin() + payload_len,
                       (*truth_)[b - 1].begin());
      }
      result_.total_cycles = std::max(result_.total_cycles, rec.completion_cycle);
    }
  }

  CodeConfig code_;
  DecoderConfig dec_;
  IbpiMapping map_;
  int B_;
  int L_;
  int R_ = 0;
  int cap_ = 0;
  std::vector<std::vector<double>> y1_;
  const std::vector<std::vector<double>>& y2_;
  const std::vector<std::vector<double>>& y3_;
  const std::vector<BitVec>* truth_;
  MemoryLedger ledger_;

  std::vector<std::vector<double>> ext_;
  std::vector<TerminationKind> kinds_;
  std::vector<bool> hardened_;
  std::vector<TtState> tts_;
  std::vector<int> dr_count_, completion_, next_content_;
  std::vector<BitVec> decisions_;

  std::vector<std::vector<DrId>> queue_;
  std::vector<std::size_t> head_;
  std::vector<int8_t> slot_status_;  // 0 pending, 1 executed, 2 skipped
  std::vector<int> slot_cycle_;
  int cycle_ = 0;

  DecodeResult result_;
};

}  // namespace

DecodeResult decode_stream(const ChannelLlrs& y, const CodeConfig& code,
                           const DecoderConfig& dec, const std::vector<BitVec>* truth_w) {
  StreamDecoder decoder(y, code, dec, truth_w);
  return decoder.run();
}

DecodeResult decode_ctc(const ChannelLlrs& y, const CodeConfig& code,
                        const DecoderConfig& dec, const std::vector<BitVec>* truth_w) {
  CodeConfig classic = code;
  classic.ctc_mode = true;
  return decode_stream(y, classic, dec, truth_w);
}

}  // namespace ibptc
