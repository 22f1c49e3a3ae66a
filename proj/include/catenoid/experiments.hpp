#ifndef CATENOID_EXPERIMENTS_HPP
#define CATENOID_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "catenoid/config.hpp"

namespace catenoid {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, double>> measured;  // label -> value
  std::string detail;
  double runtime_s = 0.0;
};

// the numbered acceptance experiments; empty selection runs all
std::vector<CriterionResult> run_acceptance(const std::vector<int>& selection, std::uint64_t seed);

void write_report_json(const std::vector<CriterionResult>& results, const std::string& path);

// CLI-facing experiment drivers (write CSV/JSON products into out_dir)
struct EvolveProducts {
  std::string norms_csv, probes_csv, modulation_csv;
};
EvolveProducts run_evolve(const ExperimentConfig& cfg, bool track_modulation);

std::string run_profile(const ExperimentConfig& cfg);                  // profile.csv
std::string run_spectrum(const ExperimentConfig& cfg, int ell);        // spectrum JSON
std::string run_darboux_check(const ExperimentConfig& cfg);            // JSON text
struct ShootProducts {
  std::string shooting_json, trapped_csv;
};
ShootProducts run_shoot(const ExperimentConfig& cfg);
std::string run_tails(const ExperimentConfig& cfg);                    // tails.csv

}  // namespace catenoid

#endif
