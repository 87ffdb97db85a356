#pragma once

namespace ibptc {

// How a block's decoding ended. regular = its own pre-permuted DR passed the
// termination test; extended = inferred from neighbors (content filled by
// terminated blocks or a content-level test pass); forced = evicted by memory
// pressure; dr_limit = hit the DR cap (D_max or the scheduled maximum).
enum class TerminationKind { none, regular, extended, forced, dr_limit };

inline const char* to_string(TerminationKind k) {
  switch (k) {
    case TerminationKind::none: return "none";
    case TerminationKind::regular: return "regular";
    case TerminationKind::extended: return "extended";
    case TerminationKind::forced: return "forced";
    case TerminationKind::dr_limit: return "dr_limit";
  }
  return "?";
}

inline bool tt_approved(TerminationKind k) {
  return k == TerminationKind::regular || k == TerminationKind::extended;
}

}  // namespace ibptc
