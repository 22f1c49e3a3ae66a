#ifndef CATENOID_FLAT_ORACLE_HPP
#define CATENOID_FLAT_ORACLE_HPP

#include <vector>

#include "catenoid/evolution.hpp"

namespace catenoid {

// Sources for the Minkowski radial problem Box u = -u_tt + u_rr + (2/r) u_r
// = -f. The conjugated field v = r u solves v_tt - v_rr = r f with odd
// extension across r = 0, and the forward solution is the integral of r' f
// over the backward characteristic triangle.
struct TailSource {
  enum class Kind { power, bump };
  Kind kind = Kind::power;
  // power: f = <r>^-a <t - t0>^-b switched on at t = t0 (optionally zeroed
  // for r < r0)
  int a = 3;       // spatial exponent, 3 or 4
  double b = 3.0;  // temporal exponent
  double r0 = 0.0;
  double t0 = 0.0;
  // bump: C^2 compact bump, support r in [0, r_support] x t in [0, t_support]
  double r_support = 2.0;
  double t_support = 1.0;
};

// forward solution u(t, r); r > 0, exact zero for t <= 0
double dalembert(const TailSource& src, double t, double r, double tol = 1e-10);

struct DichotomyResult {
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  std::vector<double> times, values;  // probe series used for the fit
};

// fitted interior decay exponent at the probe radius over [t_lo, t_hi]
DichotomyResult dichotomy_experiment(int a, double b, double r_probe, double t_lo = 50.0,
                                     double t_hi = 800.0, int n_samples = 24);

struct CrossValidation {
  double max_discrepancy = 0.0;
  std::vector<double> times;
  std::vector<double> grid_values, oracle_values;
};

// grid evolution of the conjugated flat problem against the oracle at a probe
CrossValidation cross_validate(const TailSource& src, double r_probe, double t_final, double h,
                               double dt_safety = 0.5);

}  // namespace catenoid

#endif
