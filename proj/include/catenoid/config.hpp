#ifndef CATENOID_CONFIG_HPP
#define CATENOID_CONFIG_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace catenoid {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataSpec {
  int sector = 0;
  double amplitude = 1.0;
  double center = 3.0;
  double width = 1.5;
  double velocity_amplitude = 0.0;  // adds v0 with the same bump shape
};

struct SourceConfig {
  int sector = 0;
  std::string radial_type = "inv_pow";  // inv_pow: <rho>^-a; bump: compact
  double a = 4.0;
  double r0 = 0.0;        // exterior truncation radius (inv_pow)
  double r_support = 2.0; // bump
  std::string time_type = "inv_pow";  // one | inv_pow | bump
  double b = 3.0;
  double t0 = 0.0;
  double t_width = 1.0;
};

struct ExperimentConfig {
  // grid
  double rho_max = 60.0;
  int n_points = 2401;
  // evolution
  double dt_safety = 0.4;
  double t_final = 20.0;
  std::vector<int> sectors{0, 1, 2};
  double alpha = 0.1;
  double rp_cutoff = 10.0;
  std::vector<DataSpec> data{DataSpec{0, 1.0, 3.0, 1.5, 0.0}, DataSpec{1, 1.0, 2.0, 1.5, 0.0}};
  std::vector<SourceConfig> sources;
  std::vector<double> probes{1.0, 5.0};
  // modulation
  double r_ctf = 8.0;
  // shooting
  double bracket_lo = -2.0;
  double bracket_hi = 2.0;
  double envelope_factor = 1e3;
  double shoot_tol = 1e-6;
  double shoot_t_final = 40.0;
  // tails
  int tails_a = 3;
  double tails_b = 3.0;
  std::vector<double> tail_probes{1.0, 5.0};
  // run
  std::string output_dir = "out";
  std::uint64_t seed = 20240801;

  static ExperimentConfig load(const std::string& path);      // fail-closed
  static ExperimentConfig from_json_text(const std::string&);
  std::string to_json_text() const;                            // canonical
  void validate() const;
  std::uint64_t hash() const;  // FNV-1a of the canonical serialization
};

struct RunManifest {
  std::string artifact_version = "0.1.0";
  std::uint64_t config_hash = 0;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, double>> timings_s;

  void write(const std::string& path) const;
};

// shared CSV float formatting (deterministic, shortest round-trip)
std::string format_double(double v);

}  // namespace catenoid

#endif
