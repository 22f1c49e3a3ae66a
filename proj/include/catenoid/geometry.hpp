#ifndef CATENOID_GEOMETRY_HPP
#define CATENOID_GEOMETRY_HPP

#include <cmath>
#include <vector>

#include "catenoid/grid.hpp"

namespace catenoid {

// Closed forms for the catenoid of revolution in R^4, parameterized by the
// polar coordinate rho with radius function f = <rho> = sqrt(1 + rho^2).
// The profile ODE f''/(1+f'^2)^{3/2} = 2/(f (1+f'^2)^{1/2}) has the first
// integral f^2/sqrt(1+f'^2) = 1, i.e. f'^2 = f^4 - 1 (f' taken in the axial
// coordinate z). Everything below follows from that identity.
namespace closed {

template <class Real>
Real jap(Real rho) {
  return std::sqrt(Real(1) + rho * rho);
}
inline double jap2(double rho) { return 1.0 + rho * rho; }

// radial volume density sqrt|g| with the angular factor stripped
inline double weight(double rho) {
  const double j2 = jap2(rho);
  return j2 * std::sqrt(j2 / (1.0 + j2));
}
// coefficient inside the divergence-form radial Laplacian, a = sqrt|g| g^{rr}
inline double flux(double rho) { return std::sqrt(jap2(rho) * (1.0 + jap2(rho))); }
// squared radial characteristic speed
inline double g_upper_rr(double rho) { return (1.0 + jap2(rho)) / jap2(rho); }
inline double g_lower_rr(double rho) { return jap2(rho) / (1.0 + jap2(rho)); }

// |II|^2 = kappa_m^2 + 2 kappa_a^2 with kappa_m = -2 kappa_a, kappa_a = f^-3
inline double potential(double rho) {
  const double j2 = jap2(rho);
  return 6.0 / (j2 * j2 * j2);
}

// radial factor of the translation zero modes
inline double nu0(double rho) { return 1.0 / jap2(rho); }
// axial-translation zero mode, odd, -> +-1 at the ends
inline double phi_odd(double rho) { return rho * std::sqrt(jap2(rho) + 1.0) / jap2(rho); }
// dZ/drho for the axial embedding coordinate Z
inline double z_prime(double rho) { return 1.0 / std::sqrt(jap2(rho) * (jap2(rho) + 1.0)); }

}  // namespace closed

struct CatenoidProfile {
  std::vector<double> f_values;  // <rho> per node
  std::vector<double> z_values;  // axial coordinate X^4(rho), odd, |z| < S
  double S = 0.0;                // asymptotic plane half-separation, derived form
  double S_printed_variant = 0.0;  // the (f^4+1)^{-1/2} variant, reported only
};

struct MetricData {
  std::vector<double> weight;    // <rho>^3 / sqrt(1+<rho>^2)
  std::vector<double> flux;      // <rho> sqrt(1+<rho>^2)
  std::vector<double> inv_rho2;  // <rho>^-2, angular eigenvalue weight
};

struct PotentialData {
  std::vector<double> values;  // V = |II|^2 = 6 <rho>^-6
};

struct SpecialModes {
  std::vector<double> nu0;       // <rho>^-2
  std::vector<double> phi_odd;   // rho sqrt(<rho>^2+1)/<rho>^2
  std::vector<double> phi_even;  // scaling resonance, even, asymptotically constant
  std::vector<double> z_prime;   // 1/(<rho> sqrt(<rho>^2+1))
};

// z by composite trapezoid on the grid (second order); S by adaptive
// quadrature with the tail mapped analytically through u = 1/rho.
CatenoidProfile solve_profile(const RadialGrid& grid);
MetricData metric_data(const RadialGrid& grid);
PotentialData potential(const RadialGrid& grid);
SpecialModes special_modes(const RadialGrid& grid);

// high-accuracy references, independent of the grid
double axial_coordinate(double rho, double tol = 1e-12);  // Z(rho) by adaptive quadrature
double plane_separation(double tol = 1e-12);              // S, derived form
double plane_separation_printed_variant(double tol = 1e-12);

struct GeometryBundle {
  RadialGrid grid;
  CatenoidProfile profile;
  MetricData metric;
  PotentialData pot;
  SpecialModes modes;
};

GeometryBundle make_geometry(const RadialGrid& grid);

}  // namespace catenoid

#endif
