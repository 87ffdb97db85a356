#include "ibptc/config.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace ibptc {

namespace {

using nlohmann::json;

// Pulls typed values out of the flat document, collecting one error per bad
// key so a single pass reports everything wrong with a config.
class Reader {
 public:
  Reader(const json& doc, std::vector<std::string>& errors) : doc_(doc), errors_(errors) {}

  bool has(const std::string& key) {
    seen_.insert(key);
    return doc_.contains(key);
  }

  long long integer(const std::string& key, long long def, long long lo,
                    long long hi = std::numeric_limits<long long>::max()) {
    if (!has(key)) return def;
    const json& v = doc_.at(key);
    if (!v.is_number_integer()) {
      fail(key, "expects an integer");
      return def;
    }
    long long got = v.get<long long>();
    if (got < lo || got > hi) {
      fail(key, "out of range (" + std::to_string(lo) + ".." +
                    (hi == std::numeric_limits<long long>::max() ? std::string("inf")
                                                                 : std::to_string(hi)) +
                    ")");
      return def;
    }
    return got;
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t def) {
    if (!has(key)) return def;
    const json& v = doc_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0)
      return static_cast<std::uint64_t>(v.get<long long>());
    fail(key, "expects a non-negative integer");
    return def;
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = doc_.at(key);
    if (!v.is_boolean()) {
      fail(key, "expects a boolean");
      return def;
    }
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const json& v = doc_.at(key);
    if (!v.is_string()) {
      fail(key, "expects a string");
      return def;
    }
    return v.get<std::string>();
  }

  std::string choice(const std::string& key, const std::string& def,
                     std::initializer_list<const char*> allowed) {
    std::string got = text(key, def);
    for (const char* a : allowed)
      if (got == a) return got;
    std::string opts;
    for (const char* a : allowed) opts += std::string(opts.empty() ? "" : "|") + a;
    fail(key, "must be one of " + opts);
    return def;
  }

  std::vector<double> number_array(const std::string& key, std::vector<double> def) {
    if (!has(key)) return def;
    const json& v = doc_.at(key);
    if (!v.is_array()) {
      fail(key, "expects an array of numbers");
      return def;
    }
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        fail(key, "entries must be finite numbers");
        return def;
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> int_array(const std::string& key) {
    std::vector<int> out;
    if (!has(key)) return out;
    const json& v = doc_.at(key);
    if (!v.is_array()) {
      fail(key, "expects an array of integers");
      return out;
    }
    for (const json& e : v) {
      if (!e.is_number_integer()) {
        fail(key, "entries must be integers");
        return {};
      }
      out.push_back(e.get<int>());
    }
    return out;
  }

  void fail(const std::string& key, const std::string& what) {
    errors_.push_back(key + ": " + what);
  }

  void report_unknown() {
    for (const auto& item : doc_.items())
      if (seen_.find(item.key()) == seen_.end())
        errors_.push_back(item.key() + ": unknown key");
  }

 private:
  const json& doc_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

}  // namespace

ConfigResult validate_config(const nlohmann::json& doc) {
  ConfigResult out;
  if (!doc.is_object()) {
    out.errors.push_back("config: top-level must be a JSON object of flat dotted keys");
    return out;
  }
  Reader r(doc, out.errors);
  RunConfig& cfg = out.config;

  cfg.mode = r.choice("mode", "ibptc", {"ibptc", "ctc"});
  cfg.code.ctc_mode = cfg.mode == "ctc";

  cfg.code.block_len = static_cast<int>(r.integer("block_len", 400, 1, 1 << 20));
  cfg.code.tail_padding = r.boolean("tail_padding", true);

  std::string crc_text = r.text("crc", "110011011");
  try {
    cfg.code.crc = CrcSpec::from_string(crc_text);
  } catch (const std::exception& e) {
    r.fail("crc", e.what());
    cfg.code.crc = CrcSpec::from_string("110011011");
  }

  std::string fb = r.text("trellis.feedback", "1011");
  std::string ff = r.text("trellis.feedforward", "1101");
  try {
    cfg.code.trellis = TrellisSpec::from_strings(fb, ff);
  } catch (const std::exception& e) {
    out.errors.push_back("trellis.feedback/trellis.feedforward: " + std::string(e.what()));
    cfg.code.trellis = TrellisSpec::default_8state();
  }

  const bool span_given = doc.contains("ibpi.span");
  int span = static_cast<int>(r.integer("ibpi.span", cfg.code.ctc_mode ? 0 : 1, 0, 1 << 16));
  if (cfg.code.ctc_mode && span_given && span > 0) {
    r.fail("ibpi.span", "must be 0 in ctc mode");
    span = 0;
  }
  cfg.code.ibpi.span = span;
  cfg.code.ibpi.period = static_cast<int>(r.integer("ibpi.period", 3, 1, 1 << 20));
  if (cfg.code.ibpi.period < 2 * span + 1)
    r.fail("ibpi.period", "must be at least 2*span+1 = " + std::to_string(2 * span + 1));

  std::string intra = r.choice("ibpi.intra", "odd_even_rowcol",
                               {"identity", "odd_even_rowcol", "table"});
  std::vector<int> table = r.int_array("ibpi.intra_table");
  if (intra == "table") {
    cfg.code.ibpi.intra.kind = IntraKind::table;
    if (!doc.contains("ibpi.intra_table")) {
      r.fail("ibpi.intra_table", "required when ibpi.intra is table");
      cfg.code.ibpi.intra.kind = IntraKind::odd_even_rowcol;
    } else {
      cfg.code.ibpi.intra.table = table;
      IntraPermSpec probe = cfg.code.ibpi.intra;
      probe.block_len = cfg.code.block_len;
      try {
        build_intra(probe);
      } catch (const std::exception& e) {
        r.fail("ibpi.intra_table", e.what());
        cfg.code.ibpi.intra = IntraPermSpec{};
      }
    }
  } else {
    cfg.code.ibpi.intra.kind =
        intra == "identity" ? IntraKind::identity : IntraKind::odd_even_rowcol;
    if (doc.contains("ibpi.intra_table"))
      r.fail("ibpi.intra_table", "only valid when ibpi.intra is table");
  }

  cfg.dec.iterations = static_cast<int>(r.integer("iterations", 15, 1, 1 << 16));
  cfg.dec.d_max = static_cast<int>(r.integer("d_max", 30, 1, 1 << 20));
  cfg.dec.m_max = static_cast<int>(r.integer("m_max", 0, 0, 1 << 24));
  if (cfg.dec.m_max != 0 && cfg.dec.m_max < 4) {
    r.fail("m_max", "must be 0 (unconstrained) or >= 4 (one block needs m_r + 1)");
    cfg.dec.m_max = 0;
  }
  cfg.dec.m_d = static_cast<int>(r.integer("m_d", 1, 1, 1 << 16));

  std::string tt_text = r.text("tt", "hybrid:2");
  try {
    cfg.dec.tt = TtSpec::parse(tt_text, cfg.code.crc);
  } catch (const std::exception& e) {
    r.fail("tt", e.what());
    cfg.dec.tt = TtSpec::parse("hybrid:2", cfg.code.crc);
  }

  cfg.dec.policy = r.choice("forced_et_policy", "freeze", {"freeze", "harden"}) == "harden"
                       ? ForcedPolicy::harden
                       : ForcedPolicy::freeze;
  cfg.dec.metric = r.choice("app_metric", "log_map", {"log_map", "max_log"}) == "max_log"
                       ? MetricMode::max_log
                       : MetricMode::log_map;
  cfg.dec.app_termination =
      r.choice("app_termination", "open", {"open", "zero_tail_padded"}) == "zero_tail_padded"
          ? TrellisTermination::zero_tail_padded
          : TrellisTermination::open;

  cfg.sweep = r.number_array("sweep", {0.2, 0.4, 0.6, 0.8, 1.0});
  if (cfg.sweep.empty()) r.fail("sweep", "needs at least one Eb/N0 point");
  cfg.blocks_per_run = static_cast<int>(r.integer("blocks_per_run", 1000, 1));
  cfg.seed = r.unsigned64("seed", 1);
  cfg.threads = static_cast<int>(r.integer("threads", 1, 0, 1 << 12));
  cfg.out_dir = r.text("out_dir", ".");

  r.report_unknown();

  if (out.errors.empty()) {
    try {
      cfg.code = normalize_code(cfg.code);
    } catch (const std::exception& e) {
      out.errors.push_back(std::string("block_len: ") + e.what());
    }
  }
  return out;
}

RunConfig default_config() {
  ConfigResult res = validate_config(nlohmann::json::object());
  IBPTC_CHECK(res.ok(), "default configuration must validate");
  return res.config;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["mode"] = cfg.mode;
  j["block_len"] = cfg.code.block_len;
  j["tail_padding"] = cfg.code.tail_padding;
  j["crc"] = format_bits(cfg.code.crc.generator);
  j["trellis.feedback"] = format_bits(cfg.code.trellis.feedback);
  j["trellis.feedforward"] = format_bits(cfg.code.trellis.feedforward);
  j["ibpi.span"] = cfg.code.ibpi.span;
  j["ibpi.period"] = cfg.code.ibpi.period;
  switch (cfg.code.ibpi.intra.kind) {
    case IntraKind::identity: j["ibpi.intra"] = "identity"; break;
    case IntraKind::odd_even_rowcol: j["ibpi.intra"] = "odd_even_rowcol"; break;
    case IntraKind::table:
      j["ibpi.intra"] = "table";
      j["ibpi.intra_table"] = cfg.code.ibpi.intra.table;
      break;
  }
  j["iterations"] = cfg.dec.iterations;
  j["d_max"] = cfg.dec.d_max;
  j["m_max"] = cfg.dec.m_max;
  j["m_d"] = cfg.dec.m_d;
  {
    const TtSpec& tt = cfg.dec.tt;
    std::string text = to_string(tt.family);
    text += ":" + std::to_string(tt.family == TtFamily::fixed ? tt.fixed_drs : tt.rounds);
    j["tt"] = text;
  }
  j["forced_et_policy"] = cfg.dec.policy == ForcedPolicy::harden ? "harden" : "freeze";
  j["app_metric"] = cfg.dec.metric == MetricMode::max_log ? "max_log" : "log_map";
  j["app_termination"] =
      cfg.dec.app_termination == TrellisTermination::zero_tail_padded ? "zero_tail_padded"
                                                                      : "open";
  j["sweep"] = cfg.sweep;
  j["blocks_per_run"] = cfg.blocks_per_run;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["out_dir"] = cfg.out_dir;
  return j;
}

}  // namespace ibptc
