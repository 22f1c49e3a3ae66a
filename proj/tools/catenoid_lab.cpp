// Experiment runner for the catenoid stability laboratory.
//
// Subcommands: profile, spectrum, darboux-check, evolve, shoot, tails, suite.
// All randomness flows from the config seed; reruns with the same config and
// seed reproduce every data product byte for byte.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "catenoid/config.hpp"
#include "catenoid/experiments.hpp"

using namespace catenoid;

namespace {

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : ExperimentConfig::load(path);
  if (const char* env = std::getenv("CATENOID_LAB_OUT"); env && *env) cfg.output_dir = env;
  return cfg;
}

std::string out_file(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

void finish(const ExperimentConfig& cfg, const std::string& subcommand,
            std::vector<std::string> outputs, double secs) {
  RunManifest m;
  m.config_hash = cfg.hash();
  m.outputs = std::move(outputs);
  m.timings_s = {{subcommand, secs}};
  m.write(out_file(cfg, "manifest.json"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catenoid-lab: catenoid stability numerics"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (defaults are built in)");

  auto* profile = app.add_subcommand("profile", "emit the geometry table (profile.csv)");
  auto* spectrum = app.add_subcommand("spectrum", "sector spectrum as JSON");
  int ell = 0;
  spectrum->add_option("--ell", ell, "harmonic index")->required();
  auto* darboux = app.add_subcommand("darboux-check", "factorization and partner-operator report");
  auto* evolve = app.add_subcommand("evolve", "time evolution with norm tracking");
  double rctf_flag = 0.0;
  bool track_modulation = false;
  evolve->add_option("--rctf", rctf_flag, "cutoff radius override for the pairing vectors");
  evolve->add_flag("--track-modulation", track_modulation, "emit modulation.csv");
  auto* shoot_cmd = app.add_subcommand("shoot", "codimension-1 bisection for the unstable mode");
  auto* tails = app.add_subcommand("tails", "flat-oracle late-time tails");
  int tails_a = 0;
  double tails_b = 0.0;
  tails->add_option("--a", tails_a, "spatial exponent (3 or 4)");
  tails->add_option("--b", tails_b, "temporal exponent");
  auto* suite = app.add_subcommand("suite", "run the acceptance experiments");
  std::vector<int> only;
  suite->add_option("--only", only, "criterion ids to run (default: all)");

  CLI11_PARSE(app, argc, argv);

  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    if (profile->parsed()) {
      const std::string path = run_profile(cfg);
      finish(cfg, "profile", {path}, elapsed());
      std::cout << path << "\n";
    } else if (spectrum->parsed()) {
      const std::string text = run_spectrum(cfg, ell);
      const std::string path = out_file(cfg, "spectrum_ell" + std::to_string(ell) + ".json");
      std::ofstream(path) << text;
      finish(cfg, "spectrum", {path}, elapsed());
      std::cout << text;
    } else if (darboux->parsed()) {
      const std::string text = run_darboux_check(cfg);
      const std::string path = out_file(cfg, "darboux_check.json");
      std::ofstream(path) << text;
      finish(cfg, "darboux-check", {path}, elapsed());
      std::cout << text;
    } else if (evolve->parsed()) {
      if (rctf_flag > 0.0) cfg.r_ctf = rctf_flag;
      EvolveProducts p = run_evolve(cfg, track_modulation);
      std::vector<std::string> outs{p.norms_csv, p.probes_csv};
      if (!p.modulation_csv.empty()) outs.push_back(p.modulation_csv);
      finish(cfg, "evolve", outs, elapsed());
      for (const auto& o : outs) std::cout << o << "\n";
    } else if (shoot_cmd->parsed()) {
      ShootProducts p = run_shoot(cfg);
      const std::string path = out_file(cfg, "shooting.json");
      std::ofstream(path) << p.shooting_json;
      finish(cfg, "shoot", {path, p.trapped_csv}, elapsed());
      std::cout << p.shooting_json;
    } else if (tails->parsed()) {
      if (tails_a != 0) cfg.tails_a = tails_a;
      if (tails_b != 0.0) cfg.tails_b = tails_b;
      cfg.validate();
      const std::string path = run_tails(cfg);
      finish(cfg, "tails", {path}, elapsed());
      std::cout << path << "\n";
    } else if (suite->parsed()) {
      std::vector<CriterionResult> results = run_acceptance(only, cfg.seed);
      const std::string path = out_file(cfg, "report.json");
      write_report_json(results, path);
      bool all = true;
      for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << "  ("
                  << r.runtime_s << " s)\n";
        all = all && r.pass;
      }
      finish(cfg, "suite", {path}, elapsed());
      std::cout << path << "\n";
      if (!all) return 2;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
