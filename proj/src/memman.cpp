#include "ibptc/memman.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ibptc {

MemoryLedger::MemoryLedger(int m_max, int m_r, int span, int num_blocks)
    : m_max_(m_max), m_r_(m_r), span_(span), num_blocks_(num_blocks) {
  if (num_blocks < 1) throw std::invalid_argument("ledger needs num_blocks >= 1");
  if (span < 0) throw std::invalid_argument("ledger needs span >= 0");
  if (m_r != 3)
    throw std::invalid_argument("ledger models m_r = 3 (y1+y2 pair plus y3)");
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0 (0 disables the cap)");
  if (m_max > 0 && m_max < m_r + 1)
    throw std::invalid_argument("m_max cannot hold one block (needs m_r + 1)");
  blocks_.resize(static_cast<std::size_t>(num_blocks) + 1);
}

int MemoryLedger::take(int mus) {
  allocated_ += mus;
  high_water_ = std::max(high_water_, allocated_);
  IBPTC_CHECK(m_max_ == 0 || allocated_ <= m_max_, "allocation exceeded m_max");
  return mus;
}

int MemoryLedger::give(int mus) {
  allocated_ -= mus;
  IBPTC_CHECK(allocated_ >= 0, "ledger freed more than it allocated");
  return mus;
}

int MemoryLedger::m_f() const {
  if (!constrained()) return std::numeric_limits<int>::max() / 2;
  return m_max_ - allocated_;
}

void MemoryLedger::admit_block(int block, ForcedPolicy policy, const TerminateFn& on_forced) {
  IBPTC_CHECK(block >= 1 && block <= num_blocks_, "admitted block out of range");
  IBPTC_CHECK(block == next_admission_, "blocks must be admitted in arrival order");
  while (constrained() && m_f() < m_r_) forced_et(policy, on_forced);
  Alloc& a = blocks_[block];
  a.admitted = true;
  a.y12 = true;
  a.y3 = true;
  take(m_r_);
  ++next_admission_;
}

bool MemoryLedger::ensure_dr_space(int block, ForcedPolicy policy,
                                   const TerminateFn& on_forced) {
  IBPTC_CHECK(is_admitted(block), "DR on a block that was never admitted");
  if (blocks_[block].terminated) return false;
  if (blocks_[block].cat2) return true;
  while (constrained() && m_f() < 1) {
    forced_et(policy, on_forced);
    if (blocks_[block].terminated) return false;  // forced out the caller itself
  }
  blocks_[block].cat2 = true;
  take(1);
  return true;
}

ForcedRecord MemoryLedger::forced_et(ForcedPolicy policy, const TerminateFn& terminate) {
  int target = 0;
  for (int b = 1; b <= num_blocks_; ++b) {
    if (blocks_[b].admitted && !blocks_[b].terminated) {
      target = b;
      break;
    }
  }
  if (target == 0)
    throw std::runtime_error("forced termination found no target: configuration infeasible");
  ++forced_count_;
  ForcedRecord rec;
  rec.target = target;
  if (policy == ForcedPolicy::harden) {
    for (int b = target + 1; b <= std::min(num_blocks_, target + span_); ++b)
      if (blocks_[b].admitted && !blocks_[b].terminated) rec.hardened.push_back(b);
  }
  terminate(target, TerminationKind::forced);
  IBPTC_CHECK(blocks_[target].terminated, "terminate callback must release its target");
  for (int b : rec.hardened) {
    // Retain the extrinsic MU so neighbors keep a stable view until the
    // block's own window closes.
    blocks_[b].cat2_deferred = blocks_[b].cat2;
    terminate(b, TerminationKind::forced);
    IBPTC_CHECK(blocks_[b].terminated, "terminate callback must release its target");
  }
  return rec;
}

int MemoryLedger::release_on_termination(int block) {
  IBPTC_CHECK(block >= 1 && block <= num_blocks_, "released block out of range");
  Alloc& a = blocks_[block];
  IBPTC_CHECK(a.admitted, "released block was never admitted");
  IBPTC_CHECK(!a.terminated, "block released twice");
  a.terminated = true;
  int freed = 0;
  if (a.y12) {
    a.y12 = false;
    freed += give(2);
  }
  if (a.cat2 && !a.cat2_deferred) {
    a.cat2 = false;
    freed += give(1);
  }
  sweep_windows(block, freed);
  return freed;
}

bool MemoryLedger::window_terminated(int block) const {
  int lo = std::max(1, block - span_);
  int hi = std::min(num_blocks_, block + span_);
  for (int b = lo; b <= hi; ++b)
    if (!blocks_[b].terminated) return false;
  return true;
}

void MemoryLedger::sweep_windows(int around, int& freed) {
  int lo = std::max(1, around - span_);
  int hi = std::min(num_blocks_, around + span_);
  for (int b = lo; b <= hi; ++b) {
    Alloc& a = blocks_[b];
    if (!(a.y3 || a.cat2_deferred)) continue;
    if (!window_terminated(b)) continue;
    if (a.y3) {
      a.y3 = false;
      freed += give(1);
    }
    if (a.cat2_deferred) {
      IBPTC_CHECK(a.cat2, "deferred retention without an extrinsic MU");
      a.cat2 = false;
      a.cat2_deferred = false;
      freed += give(1);
    }
  }
}

bool MemoryLedger::is_admitted(int block) const {
  return block >= 1 && block <= num_blocks_ && blocks_[block].admitted;
}

bool MemoryLedger::is_terminated(int block) const {
  return block >= 1 && block <= num_blocks_ && blocks_[block].terminated;
}

bool MemoryLedger::has_cat2(int block) const {
  return block >= 1 && block <= num_blocks_ && blocks_[block].cat2;
}

void MemoryLedger::verify() const {
  int sum = 0;
  for (int b = 1; b <= num_blocks_; ++b) {
    const Alloc& a = blocks_[b];
    sum += (a.y12 ? 2 : 0) + (a.y3 ? 1 : 0) + (a.cat2 ? 1 : 0);
    IBPTC_CHECK(!a.cat2_deferred || a.cat2, "deferred flag without an extrinsic MU");
    IBPTC_CHECK(a.admitted || (!a.y12 && !a.y3 && !a.cat2), "MUs held by unadmitted block");
  }
  IBPTC_CHECK(sum == allocated_, "MU conservation broken");
  IBPTC_CHECK(allocated_ >= 0, "negative allocation");
  if (constrained()) {
    IBPTC_CHECK(allocated_ <= m_max_, "allocation exceeds m_max");
    IBPTC_CHECK(high_water_ <= m_max_, "high water exceeds m_max");
  }
}

}  // namespace ibptc
