#pragma once

#include <functional>

#include "ibptc/block_status.hpp"
#include "ibptc/common.hpp"

namespace ibptc {

// What a forced early termination does to the unterminated right-span
// neighborhood of its target: freeze leaves the neighbors decoding against
// the target's last values (kept visible read-only); harden terminates them
// too, keeping their extrinsic MUs allocated until their window closes.
enum class ForcedPolicy { freeze, harden };

struct ForcedRecord {
  int target = 0;
  std::vector<int> hardened;  // additional blocks terminated under harden
};

// MU accounting for one decoding run. Category I = received sample vectors
// (y1, y2 freed at the block's termination; y3 freed once every block within
// +-span is terminated). Category II = one extrinsic vector per block,
// allocated at its first DR. Hard decisions and the arrival buffer are not
// MU-counted. m_max = 0 disables the cap (unconstrained accounting only).
class MemoryLedger {
 public:
  // Throws std::invalid_argument when a cap cannot hold one block (m_max < m_r + 1).
  MemoryLedger(int m_max, int m_r, int span, int num_blocks);

  // Terminates `block` with the given kind on the pipeline side; the callback
  // must end by calling release_on_termination(block).
  using TerminateFn = std::function<void(int block, TerminationKind kind)>;

  // Frees space with forced ETs until m_r MUs are available, then allocates
  // the category-I MUs. Blocks must be admitted in arrival order.
  void admit_block(int block, ForcedPolicy policy, const TerminateFn& on_forced);

  // False when the block is already terminated (the scheduled DR is not
  // needed). Otherwise guarantees the block owns its category-II MU,
  // forcing out the most ancient unterminated block when no MU is free.
  // Can terminate `block` itself; that also returns false.
  bool ensure_dr_space(int block, ForcedPolicy policy, const TerminateFn& on_forced);

  // Terminates the most ancient admitted unterminated block. Throws
  // std::runtime_error when no target exists (infeasible configuration).
  ForcedRecord forced_et(ForcedPolicy policy, const TerminateFn& terminate);

  // Frees y1, y2 and the extrinsic MU (unless retention was deferred by
  // harden), then sweeps +-span windows and frees every y3 / deferred
  // extrinsic MU whose window is now fully terminated. Returns MUs freed.
  int release_on_termination(int block);

  bool is_admitted(int block) const;
  bool is_terminated(int block) const;
  bool has_cat2(int block) const;

  bool constrained() const { return m_max_ > 0; }
  int m_max() const { return m_max_; }
  int m_r() const { return m_r_; }
  int allocated() const { return allocated_; }
  int m_f() const;  // free MUs under a cap; huge sentinel when unconstrained
  int high_water() const { return high_water_; }
  int forced_count() const { return forced_count_; }

  // Conservation and bounds; throws via IBPTC_CHECK on violation.
  void verify() const;

 private:
  struct Alloc {
    bool admitted = false;
    bool terminated = false;
    bool y12 = false;           // 2 MUs
    bool y3 = false;            // 1 MU
    bool cat2 = false;          // 1 MU
    bool cat2_deferred = false; // harden retention: window-gated release
  };

  int take(int mus);
  int give(int mus);
  bool window_terminated(int block) const;
  void sweep_windows(int around, int& freed);

  int m_max_;
  int m_r_;
  int span_;
  int num_blocks_;
  int allocated_ = 0;
  int high_water_ = 0;
  int forced_count_ = 0;
  int next_admission_ = 1;
  std::vector<Alloc> blocks_;  // 1-based
};

}  // namespace ibptc
