#pragma once

#include <map>
#include <set>
#include <utility>

#include "ibptc/softblock.hpp"

namespace ibptc {

enum class IntraKind { identity, odd_even_rowcol, table };

struct IntraPermSpec {
  IntraKind kind = IntraKind::odd_even_rowcol;
  int block_len = 0;
  std::vector<int> table;  // used when kind == table; must be a bijection
};

// Forward table pi: data position j lands in slot pi[j].
std::vector<int> build_intra(const IntraPermSpec& spec);

struct IbpiSpec {
  int block_len = 0;  // L
  int span = 0;       // S, blocks each side
  int period = 1;     // P, positional cycle of the spreading rule; P >= 2S+1
  IntraPermSpec intra;
};

struct BlockPos {
  int block = 0;  // 1-based
  int pos = 0;    // 0-based
  bool operator==(const BlockPos&) const = default;
};

// Stream permutation: intra permutation inside each block followed by an
// inter-block exchange. Slot q carries class d(q) = ((q mod P) mod (2S+1)) - S
// after the intra stage; class(+d) slots of block i swap pairwise (ascending)
// with class(-d) slots of block i+d. Unpaired slots and pairs whose partner
// block falls outside [1, B] self-map, so any finite window stays a bijection
// and no bit travels more than S blocks.
class IbpiMapping {
 public:
  BlockPos forward(int block, int pos, int num_blocks) const;
  BlockPos inverse(int block, int pos, int num_blocks) const;

  int block_len() const { return l_; }
  int span() const { return s_; }

  // Slot-level views used by the encoder/decoder hot paths.
  int intra(int pos) const { return intra_[pos]; }
  int intra_inv(int slot) const { return intra_inv_[slot]; }
  int slot_offset(int slot) const { return offset_[slot]; }
  int slot_mate(int slot) const { return mate_[slot]; }

 private:
  friend IbpiMapping build_ibpi(const IbpiSpec& spec);
  int l_ = 0;
  int s_ = 0;
  std::vector<int> intra_;      // data pos -> slot
  std::vector<int> intra_inv_;  // slot -> data pos
  std::vector<int> offset_;     // slot -> class offset in [-S, S]
  std::vector<int> mate_;       // slot -> partner slot, -1 when self-mapping
};

IbpiMapping build_ibpi(const IbpiSpec& spec);

// A window of per-block soft buffers, target of scatter operations.
struct SoftWindow {
  int first_block = 1;  // block id of blocks[0]
  std::vector<std::vector<double>> blocks;

  std::vector<double>* at(int block_id) {
    int idx = block_id - first_block;
    if (idx < 0 || idx >= static_cast<int>(blocks.size())) return nullptr;
    return &blocks[idx];
  }
};

// Scatters block i's pre-permuted extrinsic values to their post-permuted
// homes inside the window. Every source position is written exactly once;
// a window that cannot hold a target is a scheduling bug.
void interleave_block(const std::vector<double>& extrinsic, int block,
                      const IbpiMapping& mapping, int num_blocks, SoftWindow& target);

// Mirror of interleave_block under the inverse map (post -> pre direction).
void deinterleave_block(const std::vector<double>& extrinsic, int block,
                        const IbpiMapping& mapping, int num_blocks, SoftWindow& target);

enum class FillDirection { pre, post };

// Records which (source block, round) scatters completed, per direction.
class FillLedger {
 public:
  void record(FillDirection dir, int source_block, int round) {
    done_[key(dir, round)].insert(source_block);
  }
  bool has(FillDirection dir, int source_block, int round) const {
    auto it = done_.find(key(dir, round));
    return it != done_.end() && it->second.count(source_block) > 0;
  }

 private:
  static std::pair<int, int> key(FillDirection dir, int round) {
    return {static_cast<int>(dir), round};
  }
  std::map<std::pair<int, int>, std::set<int>> done_;
};

struct FillStatus {
  bool complete = false;
  std::vector<int> missing;
};

// A block's oriented content is complete once all 2S+1 contributing blocks
// (clipped to [1, B]) have scattered at the given round.
FillStatus fill_status(const FillLedger& ledger, int block, FillDirection dir,
                       int round, int span, int num_blocks);

}  // namespace ibptc
