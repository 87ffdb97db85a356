#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "ibptc/sim.hpp"

namespace {

int fail_usage(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
  return 2;
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    std::cerr << "failed to write " << path << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stream turbo code laboratory: coupled-block simulation and latency tools"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mode;
  std::uint64_t seed = 0;
  int threads = -1;
  app.add_option("--config", config_path, "JSON config file (flat dotted keys)");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed override");
  auto* out_opt = app.add_option("--out", out_dir, "output directory override");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads (0 = hardware)");
  auto* mode_opt =
      app.add_option("--mode", mode, "decoder mode override")->check(CLI::IsMember({"ibptc", "ctc"}));

  auto* ber_cmd = app.add_subcommand("ber", "sweep Eb/N0 and write error-rate statistics");
  auto* latency_cmd =
      app.add_subcommand("latency", "static decoding-delay profile for the configured stream");
  auto* validate_cmd = app.add_subcommand("validate", "check a config and echo its normalized form");

  CLI11_PARSE(app, argc, argv);

  nlohmann::json doc = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config file: " << config_path << "\n";
      return 2;
    }
    try {
      in >> doc;
    } catch (const std::exception& e) {
      std::cerr << "config parse error: " << e.what() << "\n";
      return 2;
    }
  }
  if (seed_opt->count()) doc["seed"] = seed;
  if (out_opt->count()) doc["out_dir"] = out_dir;
  if (threads_opt->count()) doc["threads"] = threads;
  if (mode_opt->count()) doc["mode"] = mode;

  ibptc::ConfigResult res = ibptc::validate_config(doc);
  if (!res.ok()) return fail_usage(res.errors);
  const ibptc::RunConfig& cfg = res.config;

  try {
    if (validate_cmd->parsed()) {
      std::cout << ibptc::config_to_json(cfg).dump(2) << "\n";
      return 0;
    }

    std::filesystem::path out_path(cfg.out_dir);
    std::filesystem::create_directories(out_path);

    if (ber_cmd->parsed()) {
      std::vector<ibptc::PointStats> points = ibptc::run_ber(cfg);
      std::string csv = ibptc::ber_csv(points);
      std::cout << csv;
      if (!write_file(out_path / "ber.csv", csv)) return 1;
      if (!write_file(out_path / "ber_summary.json",
                      ibptc::ber_summary(cfg, points).dump(2) + "\n"))
        return 1;
      return 0;
    }

    if (latency_cmd->parsed()) {
      ibptc::LatencyReport rep = ibptc::run_latency(cfg);
      std::string coupled = ibptc::latency_csv(rep.ibptc);
      std::string classic = ibptc::latency_csv(rep.ctc);
      std::cout << "coupled stream:\n" << coupled << "classic baseline:\n" << classic;
      if (!write_file(out_path / "latency_ibptc.csv", coupled)) return 1;
      if (!write_file(out_path / "latency_ctc.csv", classic)) return 1;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
