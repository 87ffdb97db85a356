#include "ibptc/interleave.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ibptc {

namespace {

std::vector<int> invert_perm(const std::vector<int>& p) {
  std::vector<int> inv(p.size(), -1);
  for (int j = 0; j < static_cast<int>(p.size()); ++j) {
    int v = p[j];
    if (v < 0 || v >= static_cast<int>(p.size()) || inv[v] != -1)
      throw std::invalid_argument("intra permutation is not a bijection");
    inv[v] = j;
  }
  return inv;
}

}  // namespace

std::vector<int> build_intra(const IntraPermSpec& spec) {
  const int L = spec.block_len;
  if (L < 1) throw std::invalid_argument("intra permutation needs block_len >= 1");
  std::vector<int> pi(L);
  switch (spec.kind) {
    case IntraKind::identity:
      for (int j = 0; j < L; ++j) pi[j] = j;
      break;
    case IntraKind::odd_even_rowcol: {
      // Stage 1 splits even positions before odd ones; stage 2 writes that
      // sequence row-major into a near-square grid and reads column-major.
      std::vector<int> oddeven(L);
      const int half = (L + 1) / 2;
      for (int j = 0; j < L; ++j) oddeven[j] = (j % 2 == 0) ? j / 2 : half + j / 2;
      int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(L))));
      std::vector<int> readpos(L, -1);
      int k = 0;
      for (int c = 0; c < cols; ++c)
        for (int idx = c; idx < L; idx += cols) readpos[idx] = k++;
      for (int j = 0; j < L; ++j) pi[j] = readpos[oddeven[j]];
      break;
    }
    case IntraKind::table:
      if (static_cast<int>(spec.table.size()) != L)
        throw std::invalid_argument("intra table size must equal block_len");
      pi = spec.table;
      invert_perm(pi);  // validates
      break;
  }
  return pi;
}

IbpiMapping build_ibpi(const IbpiSpec& spec) {
  const int L = spec.block_len;
  const int S = spec.span;
  const int P = spec.period;
  if (L < 1) throw std::invalid_argument("ibpi needs block_len >= 1");
  if (S < 0) throw std::invalid_argument("ibpi span must be >= 0");
  if (P < 2 * S + 1)
    throw std::invalid_argument("ibpi period must be at least 2*span+1");

  IntraPermSpec intra = spec.intra;
  if (intra.block_len != 0 && intra.block_len != L)
    throw std::invalid_argument("intra block_len disagrees with ibpi block_len");
  intra.block_len = L;

  IbpiMapping m;
  m.l_ = L;
  m.s_ = S;
  m.intra_ = build_intra(intra);
  m.intra_inv_ = invert_perm(m.intra_);
  m.offset_.resize(L);
  m.mate_.assign(L, -1);
  const int classes = 2 * S + 1;
  for (int q = 0; q < L; ++q) m.offset_[q] = (q % P) % classes - S;
  for (int d = 1; d <= S; ++d) {
    std::vector<int> fwd, bwd;  // ascending by construction
    for (int q = 0; q < L; ++q) {
      if (m.offset_[q] == d) fwd.push_back(q);
      if (m.offset_[q] == -d) bwd.push_back(q);
    }
    const int n = static_cast<int>(std::min(fwd.size(), bwd.size()));
    for (int i = 0; i < n; ++i) {
      m.mate_[fwd[i]] = bwd[i];
      m.mate_[bwd[i]] = fwd[i];
    }
  }
  return m;
}

namespace {

// Slot-level exchange map; a self-inverse once the window is fixed.
BlockPos slot_map(const IbpiMapping& m, int block, int slot, int num_blocks) {
  int mate = m.slot_mate(slot);
  if (mate < 0) return {block, slot};
  int tb = block + m.slot_offset(slot);
  if (tb < 1 || tb > num_blocks) return {block, slot};
  return {tb, mate};
}

void check_args(const IbpiMapping& m, int block, int pos, int num_blocks) {
  if (num_blocks < 1) throw std::invalid_argument("num_blocks must be >= 1");
  if (block < 1 || block > num_blocks) throw std::invalid_argument("block id out of range");
  if (pos < 0 || pos >= m.block_len()) throw std::invalid_argument("position out of range");
}

}  // namespace

BlockPos IbpiMapping::forward(int block, int pos, int num_blocks) const {
  check_args(*this, block, pos, num_blocks);
  return slot_map(*this, block, intra_[pos], num_blocks);
}

BlockPos IbpiMapping::inverse(int block, int pos, int num_blocks) const {
  check_args(*this, block, pos, num_blocks);
  BlockPos owner = slot_map(*this, block, pos, num_blocks);
  return {owner.block, intra_inv_[owner.pos]};
}

void interleave_block(const std::vector<double>& extrinsic, int block,
                      const IbpiMapping& mapping, int num_blocks, SoftWindow& target) {
  IBPTC_CHECK(static_cast<int>(extrinsic.size()) == mapping.block_len(),
              "scatter source must span one block");
  for (int j = 0; j < mapping.block_len(); ++j) {
    BlockPos dst = mapping.forward(block, j, num_blocks);
    std::vector<double>* vec = target.at(dst.block);
    IBPTC_CHECK(vec != nullptr, "scatter target block missing from window");
    IBPTC_CHECK(static_cast<int>(vec->size()) == mapping.block_len(),
                "scatter target has wrong length");
    (*vec)[dst.pos] = extrinsic[j];
  }
}

void deinterleave_block(const std::vector<double>& extrinsic, int block,
                        const IbpiMapping& mapping, int num_blocks, SoftWindow& target) {
  IBPTC_CHECK(static_cast<int>(extrinsic.size()) == mapping.block_len(),
              "scatter source must span one block");
  for (int j = 0; j < mapping.block_len(); ++j) {
    BlockPos src = mapping.inverse(block, j, num_blocks);
    std::vector<double>* vec = target.at(src.block);
    IBPTC_CHECK(vec != nullptr, "scatter target block missing from window");
    IBPTC_CHECK(static_cast<int>(vec->size()) == mapping.block_len(),
                "scatter target has wrong length");
    (*vec)[src.pos] = extrinsic[j];
  }
}

FillStatus fill_status(const FillLedger& ledger, int block, FillDirection dir,
                       int round, int span, int num_blocks) {
  FillStatus st;
  int lo = std::max(1, block - span);
  int hi = std::min(num_blocks, block + span);
  for (int b = lo; b <= hi; ++b)
    if (!ledger.has(dir, b, round)) st.missing.push_back(b);
  st.complete = st.missing.empty();
  return st;
}

}  // namespace ibptc
