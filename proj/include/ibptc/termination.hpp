#pragma once

#include <optional>

#include "ibptc/block_status.hpp"
#include "ibptc/crc.hpp"
#include "ibptc/softblock.hpp"

namespace ibptc {

enum class TtFamily { crc, sign, hybrid, genie, fixed };

const char* to_string(TtFamily f);

struct TtSpec {
  TtFamily family = TtFamily::hybrid;
  int rounds = 1;     // m consecutive passing rounds required (ignored by fixed)
  int fixed_drs = 0;  // fixed family: terminate after this many DRs
  CrcSpec crc;        // used by crc/hybrid

  // "crc:3", "sign:5", "hybrid:2", "genie", "genie:2", "fixed:30".
  static TtSpec parse(const std::string& text, const CrcSpec& crc);
};

struct TtState {
  int streak = 0;
  int rounds_consumed = 0;
  BitVec prev;            // last hard decisions seen, any orientation
  bool has_prev = false;  // present iff at least one sign-style round observed
};

struct TtOutcome {
  bool pass = false;
  bool consumed = false;  // whether this call counted as a test round
};

// One termination-test round against the given posterior LLRs.
//  - crc/hybrid/genie evaluate pre-permuted vectors only; post-orientation
//    calls are no-ops (pass=false, nothing consumed, streak untouched).
//  - sign consumes rounds in both orientations and keeps one shared history:
//    the caller must hand it a vector already expressed in pre-permuted order
//    (the decoder uses the block's refreshed content on post rounds). Only
//    the very first observation passes vacuously; from then on a pass means
//    the hard decisions repeated the previous round exactly.
//  - fixed counts every call as one consumed round and never fails.
// A failing round resets the streak to zero. genie requires truth.
TtOutcome tt_round(const TtSpec& spec, TtState& state,
                   const std::vector<double>& posterior, Orientation orientation,
                   const BitVec* truth = nullptr);

// streak >= m, or for fixed: rounds consumed >= the fixed DR count.
bool should_terminate(const TtSpec& spec, const TtState& state);

// Contributing blocks of an oriented content: [block-S, block+S] clipped.
std::vector<int> content_sources(int block, int span, int num_blocks);

// Extended-ET rule (a): every contribution to the content comes from blocks
// that are already terminated.
bool content_all_terminated(const std::vector<TerminationKind>& kinds, int block,
                            int span, int num_blocks);

struct AuditCounts {
  long long correct_terminations = 0;
  long long incorrect_terminations = 0;  // test-approved yet wrong
  long long forced_at_limit = 0;
};

// Classifies per-block outcomes against truth. Only test-approved kinds
// (regular/extended) can be "incorrect terminations"; forced and dr_limit
// blocks are counted separately regardless of correctness.
AuditCounts false_termination_audit(const std::vector<TerminationKind>& kinds,
                                    const std::vector<bool>& block_correct);

}  // namespace ibptc
