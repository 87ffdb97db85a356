#pragma once

#include "ibptc/app.hpp"
#include "ibptc/channel.hpp"
#include "ibptc/crc.hpp"
#include "ibptc/interleave.hpp"
#include "ibptc/memman.hpp"
#include "ibptc/scheduler.hpp"
#include "ibptc/termination.hpp"

namespace ibptc {

struct CodeConfig {
  int block_len = 400;       // L, systematic bits per block (incl. CRC + tail)
  bool tail_padding = true;  // nu known-zero data bits before the CRC parity
  bool ctc_mode = false;     // classic mode: span forced to 0
  CrcSpec crc;
  TrellisSpec trellis;
  IbpiSpec ibpi;

  int data_len() const { return block_len - crc.parity_bits(); }
  int payload_len() const { return data_len() - (tail_padding ? trellis.nu : 0); }
};

struct EncodedStream {
  std::vector<BitVec> w;   // systematic blocks (CRC codewords), Z1
  std::vector<BitVec> z2;  // component parity of each pre-permuted block
  std::vector<BitVec> z3;  // component parity of each post-permuted block
};

// payload[i] has payload_len() bits. Each block becomes
// [payload | zero tail | CRC parity], is encoded directly for z2, and the
// stream-permuted blocks are encoded for z3 (block i needs blocks up to i+S).
EncodedStream encode_stream(const std::vector<BitVec>& payload, const CodeConfig& code);

struct ChannelLlrs {
  std::vector<std::vector<double>> y1, y2, y3;  // per block, length L each
};

// AWGN LLRs for all three coded streams; deterministic in (seed, stream, position).
ChannelLlrs transmit(const EncodedStream& z, const ChannelConfig& cfg);

struct DecoderConfig {
  int iterations = 15;   // N; R_max = 2N rounds per block
  int d_max = 30;        // DR cap per block (effective cap: min(d_max, 2N))
  int m_max = 0;         // MU cap, 0 = unconstrained
  int m_d = 1;           // ADUs
  TtSpec tt;
  ForcedPolicy policy = ForcedPolicy::freeze;
  MetricMode metric = MetricMode::log_map;
  TrellisTermination app_termination = TrellisTermination::open;

  int r_max() const { return 2 * iterations; }
  int effective_cap() const { return d_max < r_max() ? d_max : r_max(); }
};

struct BlockRecord {
  int id = 0;
  int dr_count = 0;  // executed DRs labeled with this block (incl. serving)
  TerminationKind kind = TerminationKind::none;
  int completion_cycle = 0;
  BitVec decisions;  // full systematic decisions, length L
  bool crc_ok = false;
  bool payload_correct = false;  // valid only when truth was supplied
};

struct DecodeResult {
  std::vector<BlockRecord> blocks;
  long long total_drs = 0;
  int total_cycles = 0;
  int mu_high_water = 0;
  long long regular_count = 0, extended_count = 0, forced_count = 0, dr_limit_count = 0;

  double avg_dr() const {
    return blocks.empty() ? 0.0 : static_cast<double>(total_drs) / blocks.size();
  }
};

// Stream decoder with variable termination time: executes the zigzag schedule
// cycle-synchronously; per DR: ensure space -> APP decode -> scatter ->
// termination test -> extended-ET scan -> release. Deterministic in its inputs.
// truth_w, when given, enables the genie test and correctness records.
DecodeResult decode_stream(const ChannelLlrs& y, const CodeConfig& code,
                           const DecoderConfig& dec,
                           const std::vector<BitVec>* truth_w = nullptr);

// Classic baseline: identical machinery with a span-0 mapping.
DecodeResult decode_ctc(const ChannelLlrs& y, const CodeConfig& code,
                        const DecoderConfig& dec,
                        const std::vector<BitVec>* truth_w = nullptr);

// Effective code spec: clips ctc mode to span 0 and propagates block_len into
// the permutation spec. Throws std::invalid_argument on inconsistencies.
CodeConfig normalize_code(CodeConfig code);

}  // namespace ibptc
