#ifndef CATENOID_SHOOTING_HPP
#define CATENOID_SHOOTING_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "catenoid/geometry.hpp"
#include "catenoid/modulation.hpp"
#include "catenoid/operators.hpp"

namespace catenoid {

struct TrapEnvelope {
  double lambda0 = 0.0;
  // <tau>^-3 shape
  double value(double tau) const { return lambda0 * std::pow(1.0 + tau * tau, -1.5); }
};

struct DirectionClassification {
  bool growing_is_zplus = true;   // (phi_mu, psidot = -mu w phi_mu) grows
  double rate_growing = 0.0;      // fitted, expect +mu
  double rate_decaying = 0.0;     // fitted on the pre-floor window, expect -mu
};

// Seeds the flow with the two untruncated eigenpair directions and fits the
// exponential rate of the projection coefficients over t in [2, 10].
DirectionClassification classify_directions(const GeometryBundle& geom,
                                            const SpectrumReport& h0_spectrum,
                                            const ZVectors& zv, double dt);

// data(b) = (base_psi + b dir_psi, base_v + b dir_v), ell = 0 sector
struct DataFamily {
  std::vector<double> base_psi, base_v;
  std::vector<double> dir_psi, dir_v;
};

// the family direction used throughout: truncated eigenfunction along the
// classifier's growing direction
DataFamily make_family(const GeometryBundle& geom, const SpectrumReport& h0_spectrum,
                       const ZVectors& zv, const DirectionClassification& cls,
                       std::vector<double> base_psi, std::vector<double> base_v);

struct Trial {
  double b = 0.0;
  int exit_side = 0;      // -1 / +1 envelope crossing, 0 = trapped to T_final
  double tau_exit = 0.0;  // crossing time (or T_final)
};

struct ShootingOutcome {
  double b0_star = 0.0;
  int iterations = 0;
  std::vector<Trial> trials;
  std::vector<std::pair<double, double>> bracket_history;
  bool found_trapped = false;
  double lambda0 = 0.0;
  // recorded series of the trapped (or last) candidate
  std::vector<double> trapped_times;
  std::vector<double> trapped_aplus;
  // near-envelope drift check accumulated over non-trapped trials:
  // fraction of samples with lambda/2 < |a+| < lambda where d(a+^2)/dtau >= mu a+^2
  long band_samples = 0;
  long band_samples_ok = 0;
};

struct ShootConfig {
  double t_final = 40.0;
  double dt_safety = 0.5;
  double envelope_factor = 1e3;  // lambda0 = factor * initial |a+|
  double bracket_lo = -2.0;
  double bracket_hi = 2.0;
  double tol = 0.0;  // stop when bracket width < tol (0: run until trapped)
  double record_dt = 0.25;
};

// Bisection over b along the growing direction. Trials run in double while
// they exit early; the near-critical endgame and the trapped verification
// run in extended precision (the growing mode outpaces double rounding well
// before T_final at this mu).
ShootingOutcome shoot(const GeometryBundle& geom, const SpectrumReport& h0_spectrum,
                      const ZVectors& zv, const DirectionClassification& cls,
                      const DataFamily& family, const ShootConfig& cfg);

// closed-form b that cancels the growing coefficient
// g(data) = (<psi0, phi_mu>_w + s <v0, phi_mu>_w / mu) / 2 with the sign s
// from the classifier; solves g(base) + b g(dir) = 0
struct AnalyticB0 {
  double b0 = 0.0;
  bool degenerate = false;  // family direction orthogonal to the growing mode
};

AnalyticB0 analytic_b0(const GeometryBundle& geom, const SpectrumReport& h0_spectrum,
                       const DirectionClassification& cls, const DataFamily& family);

// single-trial exit time at parameter b (for the continuity property)
Trial run_trial(const GeometryBundle& geom, const SpectrumReport& h0_spectrum, const ZVectors& zv,
                const DataFamily& family, double b, const ShootConfig& cfg, double lambda0,
                bool extended_precision);

}  // namespace catenoid

#endif
