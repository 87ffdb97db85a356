#include "ibptc/termination.hpp"

#include <algorithm>
#include <stdexcept>

namespace ibptc {

const char* to_string(TtFamily f) {
  switch (f) {
    case TtFamily::crc: return "crc";
    case TtFamily::sign: return "sign";
    case TtFamily::hybrid: return "hybrid";
    case TtFamily::genie: return "genie";
    case TtFamily::fixed: return "fixed";
  }
  return "?";
}

TtSpec TtSpec::parse(const std::string& text, const CrcSpec& crc) {
  std::string name = text;
  int count = -1;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    std::string num = text.substr(colon + 1);
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad termination test count in '" + text + "'");
    count = std::stoi(num);
    if (count < 1) throw std::invalid_argument("termination test count must be >= 1");
  }
  TtSpec spec;
  spec.crc = crc;
  if (name == "crc") spec.family = TtFamily::crc;
  else if (name == "sign") spec.family = TtFamily::sign;
  else if (name == "hybrid") spec.family = TtFamily::hybrid;
  else if (name == "genie") spec.family = TtFamily::genie;
  else if (name == "fixed") spec.family = TtFamily::fixed;
  else throw std::invalid_argument("unknown termination test '" + text + "'");
  if (spec.family == TtFamily::fixed) {
    if (count < 0) throw std::invalid_argument("fixed termination needs a DR count, e.g. fixed:30");
    spec.fixed_drs = count;
  } else {
    spec.rounds = count < 0 ? 1 : count;
  }
  return spec;
}

TtOutcome tt_round(const TtSpec& spec, TtState& state,
                   const std::vector<double>& posterior, Orientation orientation,
                   const BitVec* truth) {
  const bool pre = orientation == Orientation::pre_permuted;
  TtOutcome out;
  switch (spec.family) {
    case TtFamily::fixed:
      out.pass = true;
      out.consumed = true;
      break;
    case TtFamily::crc: {
      if (!pre) return out;
      out.pass = crc_check(spec.crc, hard_decide(posterior));
      out.consumed = true;
      break;
    }
    case TtFamily::genie: {
      if (!pre) return out;
      if (truth == nullptr) throw std::invalid_argument("genie termination needs truth bits");
      out.pass = hard_decide(posterior) == *truth;
      out.consumed = true;
      break;
    }
    case TtFamily::sign: {
      BitVec hard = hard_decide(posterior);
      out.pass = !state.has_prev || hard == state.prev;  // first observation passes vacuously
      state.prev = std::move(hard);
      state.has_prev = true;
      out.consumed = true;
      break;
    }
    case TtFamily::hybrid: {
      if (!pre) return out;
      BitVec hard = hard_decide(posterior);
      bool sign_ok = !state.has_prev || hard == state.prev;
      out.pass = sign_ok && crc_check(spec.crc, hard);
      state.prev = std::move(hard);
      state.has_prev = true;
      out.consumed = true;
      break;
    }
  }
  if (out.consumed) {
    ++state.rounds_consumed;
    state.streak = out.pass ? state.streak + 1 : 0;
  }
  return out;
}

bool should_terminate(const TtSpec& spec, const TtState& state) {
  if (spec.family == TtFamily::fixed) return state.rounds_consumed >= spec.fixed_drs;
  return state.streak >= spec.rounds;
}

std::vector<int> content_sources(int block, int span, int num_blocks) {
  std::vector<int> out;
  int lo = std::max(1, block - span);
  int hi = std::min(num_blocks, block + span);
  for (int b = lo; b <= hi; ++b) out.push_back(b);
  return out;
}

// kinds[i] describes block i+1.
bool content_all_terminated(const std::vector<TerminationKind>& kinds, int block,
                            int span, int num_blocks) {
  IBPTC_CHECK(static_cast<int>(kinds.size()) == num_blocks, "kinds must cover every block");
  for (int b : content_sources(block, span, num_blocks))
    if (kinds[b - 1] == TerminationKind::none) return false;
  return true;
}

AuditCounts false_termination_audit(const std::vector<TerminationKind>& kinds,
                                    const std::vector<bool>& block_correct) {
  IBPTC_CHECK(kinds.size() == block_correct.size(), "audit vectors must align");
  AuditCounts out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (tt_approved(kinds[i])) {
      if (block_correct[i]) ++out.correct_terminations;
      else ++out.incorrect_terminations;
    } else if (kinds[i] == TerminationKind::forced || kinds[i] == TerminationKind::dr_limit) {
      ++out.forced_at_limit;
    }
  }
  return out;
}

}  // namespace ibptc
