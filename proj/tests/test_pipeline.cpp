#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ibptc/pipeline.hpp"

using namespace ibptc;

namespace {

CodeConfig small_code(int block_len, int span = 1, IntraKind intra = IntraKind::odd_even_rowcol) {
  CodeConfig code;
  code.block_len = block_len;
  code.ibpi.span = span;
  code.ibpi.period = 2 * span + 1;
  code.ibpi.intra.kind = intra;
  return code;
}

std::vector<BitVec> random_payloads(const CodeConfig& raw, int blocks, std::uint64_t key) {
  CodeConfig code = normalize_code(raw);
  std::vector<BitVec> out(blocks);
  for (int b = 0; b < blocks; ++b) {
    out[b].resize(code.payload_len());
    for (int j = 0; j < code.payload_len(); ++j)
      out[b][j] = bit_sample(key, static_cast<std::uint64_t>(b) * code.payload_len() + j);
  }
  return out;
}

ChannelLlrs noiseless(const EncodedStream& enc) {
  ChannelConfig ch;
  ch.ebn0_db = 40.0;  // saturates every LLR at the correct sign
  ch.seed = 1;
  return transmit(enc, ch);
}

long long payload_errors(const DecodeResult& res, const std::vector<BitVec>& payload) {
  long long errs = 0;
  for (std::size_t b = 0; b < payload.size(); ++b)
    for (std::size_t j = 0; j < payload[b].size(); ++j)
      errs += (res.blocks[b].decisions[j] != payload[b][j]);
  return errs;
}

// Conventional turbo decoding of the whole stream: fixed iteration count,
// round-major order, blocks ascending inside each round, decisions for block k
// sampled right after its even-round update. Used as the ground truth for the
// schedule equivalence case.
std::vector<BitVec> conventional_reference(const ChannelLlrs& y, const CodeConfig& norm,
                                           int iterations) {
  const IbpiMapping map = build_ibpi(norm.ibpi);
  const int B = static_cast<int>(y.y1.size());
  const int L = norm.block_len;
  std::vector<std::vector<double>> ext(B, std::vector<double>(L, 0.0));
  std::vector<BitVec> decisions(B);
  for (int r = 1; r <= 2 * iterations; ++r) {
    if (r % 2 == 1) {
      for (int b = 1; b <= B; ++b) {
        AppInput in;
        in.systematic = y.y1[b - 1];
        in.parity = y.y2[b - 1];
        in.apriori = ext[b - 1];
        in.trellis = &norm.trellis;
        ext[b - 1] = app_decode(in).extrinsic;
      }
    } else {
      for (int k = 1; k <= B; ++k) {
        AppInput in;
        in.systematic.resize(L);
        in.apriori.resize(L);
        in.parity = y.y3[k - 1];
        in.trellis = &norm.trellis;
        std::vector<BlockPos> owner(L);
        for (int j = 0; j < L; ++j) {
          owner[j] = map.inverse(k, j, B);
          in.systematic[j] = y.y1[owner[j].block - 1][owner[j].pos];
          in.apriori[j] = ext[owner[j].block - 1][owner[j].pos];
        }
        AppResult res = app_decode(in);
        for (int j = 0; j < L; ++j)
          ext[owner[j].block - 1][owner[j].pos] = res.extrinsic[j];
        if (r == 2 * iterations) {
          decisions[k - 1].resize(L);
          for (int j = 0; j < L; ++j)
            decisions[k - 1][j] = (y.y1[k - 1][j] + ext[k - 1][j]) < 0.0 ? 1 : 0;
        }
      }
    }
  }
  return decisions;
}

}  // namespace

TEST_CASE("encoded stream structure") {
  CodeConfig code = small_code(20);
  CodeConfig norm = normalize_code(code);
  CHECK(norm.data_len() == 12);
  CHECK(norm.payload_len() == 9);  // 3 tail bits inside the data field

  std::vector<BitVec> payload = random_payloads(code, 4, 0xfeed);
  EncodedStream enc = encode_stream(payload, code);
  REQUIRE(enc.w.size() == 4);
  REQUIRE(enc.z2.size() == 4);
  REQUIRE(enc.z3.size() == 4);

  IbpiMapping map = build_ibpi(norm.ibpi);
  std::vector<BitVec> permuted(4, BitVec(20, 0));
  for (int i = 0; i < 4; ++i) {
    REQUIRE(enc.w[i].size() == 20);
    // Systematic block: payload, zero tail, then parity that checks out.
    for (int j = 0; j < 9; ++j) CHECK(enc.w[i][j] == payload[i][j]);
    for (int j = 9; j < 12; ++j) CHECK(enc.w[i][j] == 0);
    CHECK(crc_check(norm.crc, enc.w[i]));
    CHECK(enc.z2[i] == rsc_encode(enc.w[i], norm.trellis).first);
    for (int j = 0; j < 20; ++j) {
      BlockPos dst = map.forward(i + 1, j, 4);
      permuted[dst.block - 1][dst.pos] = enc.w[i][j];
    }
  }
  for (int k = 0; k < 4; ++k) CHECK(enc.z3[k] == rsc_encode(permuted[k], norm.trellis).first);

  // Linearity anchor: the all-zero stream encodes to all zeros.
  std::vector<BitVec> zeros(3, BitVec(norm.payload_len(), 0));
  EncodedStream zenc = encode_stream(zeros, code);
  for (int i = 0; i < 3; ++i) {
    CHECK(zenc.w[i] == BitVec(20, 0));
    CHECK(zenc.z2[i] == BitVec(20, 0));
    CHECK(zenc.z3[i] == BitVec(20, 0));
  }

  CHECK_THROWS_AS(encode_stream({}, code), std::invalid_argument);
  CHECK_THROWS_AS(encode_stream({BitVec(5, 0)}, code), std::invalid_argument);
}

TEST_CASE("ctc mode with identity intra leaves both parities equal") {
  CodeConfig code = small_code(20, 0, IntraKind::identity);
  code.ctc_mode = true;
  std::vector<BitVec> payload = random_payloads(code, 3, 0xc7c);
  EncodedStream enc = encode_stream(payload, code);
  for (int i = 0; i < 3; ++i) CHECK(enc.z3[i] == enc.z2[i]);
}

TEST_CASE("noiseless stream with an oracle test terminates every block in one dr") {
  CodeConfig code = small_code(24);
  std::vector<BitVec> payload = random_payloads(code, 5, 0x9e);
  EncodedStream enc = encode_stream(payload, code);
  ChannelLlrs y = noiseless(enc);

  DecoderConfig dec;
  dec.iterations = 3;
  dec.tt = TtSpec::parse("genie", CrcSpec::from_string("110011011"));
  DecodeResult res = decode_stream(y, code, dec, &enc.w);

  REQUIRE(res.blocks.size() == 5);
  CHECK(res.total_drs == 5);
  CHECK(res.regular_count == 5);
  CHECK(res.avg_dr() == 1.0);
  for (int b = 0; b < 5; ++b) {
    CHECK(res.blocks[b].kind == TerminationKind::regular);
    CHECK(res.blocks[b].dr_count == 1);
    CHECK(res.blocks[b].decisions == enc.w[b]);
    CHECK(res.blocks[b].crc_ok);
    CHECK(res.blocks[b].payload_correct);
    CHECK(res.blocks[b].completion_cycle == b + 1);  // one admission per cycle
  }
  CHECK(res.total_cycles == 5);
  CHECK(payload_errors(res, payload) == 0);
}

TEST_CASE("noiseless stream with a two round checksum test ends extended") {
  CodeConfig code = small_code(24);
  std::vector<BitVec> payload = random_payloads(code, 6, 0xab);
  EncodedStream enc = encode_stream(payload, code);
  ChannelLlrs y = noiseless(enc);

  DecoderConfig dec;
  dec.iterations = 4;
  dec.tt = TtSpec::parse("crc:2", CrcSpec{});
  DecodeResult res = decode_stream(y, code, dec, &enc.w);

  CHECK(res.total_drs == 12);
  CHECK(res.extended_count == 6);
  for (int b = 0; b < 6; ++b) {
    CHECK(res.blocks[b].kind == TerminationKind::extended);
    CHECK(res.blocks[b].dr_count == 2);
    CHECK(res.blocks[b].decisions == enc.w[b]);
    CHECK(res.blocks[b].payload_correct);
  }
}

TEST_CASE("fixed discipline spends exactly the configured drs") {
  CodeConfig code = small_code(24);
  std::vector<BitVec> payload = random_payloads(code, 5, 0x50);
  EncodedStream enc = encode_stream(payload, code);
  ChannelConfig ch;
  ch.ebn0_db = 1.0;
  ch.seed = 77;
  ChannelLlrs y = transmit(enc, ch);

  DecoderConfig dec;
  dec.iterations = 2;  // four rounds
  dec.tt = TtSpec::parse("fixed:4", CrcSpec{});
  DecodeResult res = decode_stream(y, code, dec, &enc.w);

  CHECK(res.total_drs == 20);
  CHECK(res.dr_limit_count == 5);
  for (const BlockRecord& rec : res.blocks) {
    CHECK(rec.kind == TerminationKind::dr_limit);
    CHECK(rec.dr_count == 4);
  }
}

TEST_CASE("variable termination matches conventional decoding when pinned to it") {
  // Fixed DR budget equal to the round count, no tail pinning, one decoder
  // unit, unconstrained memory: the dynamic executor must reproduce the
  // round-major fixed-iteration decisions bit for bit.
  CodeConfig code = small_code(24);
  code.tail_padding = false;
  CodeConfig norm = normalize_code(code);

  for (int trial = 0; trial < 5; ++trial) {
    std::vector<BitVec> payload = random_payloads(code, 6, 0x1100 + trial);
    EncodedStream enc = encode_stream(payload, code);
    ChannelConfig ch;
    ch.ebn0_db = 1.0;
    ch.seed = 400 + trial;
    ChannelLlrs y = transmit(enc, ch);

    DecoderConfig dec;
    dec.iterations = 2;
    dec.d_max = 4;
    dec.m_d = 1;
    dec.tt = TtSpec::parse("fixed:4", CrcSpec{});
    DecodeResult res = decode_stream(y, code, dec, &enc.w);

    std::vector<BitVec> want = conventional_reference(y, norm, 2);
    for (int b = 0; b < 6; ++b) {
      CAPTURE(trial);
      CAPTURE(b);
      CHECK(res.blocks[b].decisions == want[b]);
    }
  }
}

TEST_CASE("classic mode decodes blocks independently") {
  CodeConfig code = small_code(28);
  std::vector<BitVec> payload = random_payloads(code, 5, 0x31);
  EncodedStream enc = encode_stream(payload, code);
  ChannelConfig ch;
  ch.ebn0_db = 0.5;
  ch.seed = 9;
  ChannelLlrs y = transmit(enc, ch);

  DecoderConfig dec;
  dec.iterations = 3;
  dec.tt = TtSpec::parse("hybrid:2", CrcSpec{});
  DecodeResult res = decode_ctc(y, code, dec);

  // Reversing the block order must reverse the per-block outcomes.
  ChannelLlrs rev;
  for (int b = 4; b >= 0; --b) {
    rev.y1.push_back(y.y1[b]);
    rev.y2.push_back(y.y2[b]);
    rev.y3.push_back(y.y3[b]);
  }
  DecodeResult res2 = decode_ctc(rev, code, dec);
  for (int b = 0; b < 5; ++b) {
    CHECK(res2.blocks[b].decisions == res.blocks[4 - b].decisions);
    CHECK(res2.blocks[b].kind == res.blocks[4 - b].kind);
    CHECK(res2.blocks[b].dr_count == res.blocks[4 - b].dr_count);
  }
}

TEST_CASE("decoding is deterministic") {
  CodeConfig code = small_code(40);
  std::vector<BitVec> payload = random_payloads(code, 6, 0xd0);
  EncodedStream enc = encode_stream(payload, code);
  ChannelConfig ch;
  ch.ebn0_db = 0.4;
  ch.seed = 3;
  ChannelLlrs y = transmit(enc, ch);

  DecoderConfig dec;
  dec.iterations = 4;
  dec.tt = TtSpec::parse("hybrid:2", CrcSpec{});
  DecodeResult a = decode_stream(y, code, dec, &enc.w);
  DecodeResult b = decode_stream(y, code, dec, &enc.w);
  CHECK(a.total_drs == b.total_drs);
  CHECK(a.total_cycles == b.total_cycles);
  CHECK(a.mu_high_water == b.mu_high_water);
  for (int i = 0; i < 6; ++i) {
    CHECK(a.blocks[i].decisions == b.blocks[i].decisions);
    CHECK(a.blocks[i].kind == b.blocks[i].kind);
    CHECK(a.blocks[i].completion_cycle == b.blocks[i].completion_cycle);
  }
}

TEST_CASE("moderate noise stream decodes with a small dr budget") {
  CodeConfig code = small_code(100);
  std::vector<BitVec> payload = random_payloads(code, 8, 0x8a);
  EncodedStream enc = encode_stream(payload, code);
  ChannelConfig ch;
  ch.ebn0_db = 2.0;
  ch.seed = 21;
  ChannelLlrs y = transmit(enc, ch);

  DecoderConfig dec;
  dec.iterations = 10;
  dec.tt = TtSpec::parse("hybrid:2", CrcSpec{});
  DecodeResult res = decode_stream(y, code, dec, &enc.w);

  long long bits = 8LL * normalize_code(code).payload_len();
  long long errs = payload_errors(res, payload);
  CHECK(errs * 20 < bits);  // ber well under 5% at this operating point
  for (const BlockRecord& rec : res.blocks) CHECK(rec.kind != TerminationKind::none);
  CHECK(res.avg_dr() <= dec.effective_cap());
  CHECK(res.avg_dr() >= 1.0);
}

TEST_CASE("memory pressure forces early terminations but keeps the cap") {
  CodeConfig code = small_code(32);
  std::vector<BitVec> payload = random_payloads(code, 8, 0x3c);
  EncodedStream enc = encode_stream(payload, code);
  ChannelConfig ch;
  ch.ebn0_db = -2.0;  // noisy enough that tests rarely pass
  ch.seed = 5;
  ChannelLlrs y = transmit(enc, ch);

  DecoderConfig dec;
  dec.iterations = 4;
  dec.m_max = 8;  // room for two blocks
  dec.tt = TtSpec::parse("hybrid:2", CrcSpec{});
  DecodeResult res = decode_stream(y, code, dec, &enc.w);

  CHECK(res.mu_high_water <= 8);
  CHECK(res.forced_count >= 1);
  for (const BlockRecord& rec : res.blocks) {
    CHECK(rec.kind != TerminationKind::none);
    CHECK(rec.dr_count <= dec.effective_cap());
  }

  DecodeResult repeat = decode_stream(y, code, dec, &enc.w);
  CHECK(repeat.forced_count == res.forced_count);
  for (int i = 0; i < 8; ++i)
    CHECK(repeat.blocks[i].decisions == res.blocks[i].decisions);
}

TEST_CASE("tail padded blocks decide their tail bits as zeros") {
  // One DR per block: only pre-permuted content is decoded, where the
  // zero-tail backward constraint is actually true.
  CodeConfig code = small_code(24);
  std::vector<BitVec> payload = random_payloads(code, 4, 0x7a);
  EncodedStream enc = encode_stream(payload, code);
  ChannelLlrs y = noiseless(enc);

  DecoderConfig dec;
  dec.iterations = 1;
  dec.tt = TtSpec::parse("fixed:1", CrcSpec{});
  dec.app_termination = TrellisTermination::zero_tail_padded;
  DecodeResult res = decode_stream(y, code, dec, &enc.w);
  CodeConfig norm = normalize_code(code);
  for (const BlockRecord& rec : res.blocks) {
    for (int j = norm.data_len() - norm.trellis.nu; j < norm.data_len(); ++j)
      CHECK(rec.decisions[j] == 0);
    CHECK(rec.payload_correct);
  }
}

TEST_CASE("input validation") {
  CodeConfig code = small_code(24);
  std::vector<BitVec> payload = random_payloads(code, 3, 1);
  ChannelLlrs y = noiseless(encode_stream(payload, code));
  DecoderConfig dec;
  dec.tt = TtSpec::parse("hybrid:2", CrcSpec{});

  DecoderConfig bad = dec;
  bad.iterations = 0;
  CHECK_THROWS_AS(decode_stream(y, code, bad), std::invalid_argument);
  bad = dec;
  bad.d_max = 0;
  CHECK_THROWS_AS(decode_stream(y, code, bad), std::invalid_argument);
  bad = dec;
  bad.m_d = 0;
  CHECK_THROWS_AS(decode_stream(y, code, bad), std::invalid_argument);

  ChannelLlrs short_stream = y;
  short_stream.y3.pop_back();
  CHECK_THROWS_AS(decode_stream(short_stream, code, dec), std::invalid_argument);

  ChannelLlrs ragged = y;
  ragged.y2[1].pop_back();
  CHECK_THROWS_AS(decode_stream(ragged, code, dec), std::invalid_argument);

  std::vector<BitVec> truth(2);
  CHECK_THROWS_AS(decode_stream(y, code, dec, &truth), std::invalid_argument);

  DecoderConfig genie = dec;
  genie.tt = TtSpec::parse("genie", CrcSpec{});
  CHECK_THROWS_AS(decode_stream(y, code, genie), std::invalid_argument);

  CodeConfig tiny = small_code(8);  // smaller than the checksum field
  CHECK_THROWS_AS(normalize_code(tiny), std::invalid_argument);
  CodeConfig shortp = small_code(11);  // checksum fits, tail does not
  CHECK_THROWS_AS(normalize_code(shortp), std::invalid_argument);
  CodeConfig badspan = small_code(24);
  badspan.ibpi.period = 2;
  CHECK_THROWS_AS(normalize_code(badspan), std::invalid_argument);
}
