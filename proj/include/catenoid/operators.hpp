#ifndef CATENOID_OPERATORS_HPP
#define CATENOID_OPERATORS_HPP

#include <optional>
#include <vector>

#include "catenoid/geometry.hpp"
#include "catenoid/grid.hpp"

namespace catenoid {

// One spherical-harmonic sector of the stability operator,
//   H_ell = w^-1 d/drho( a d/drho . ) - ell(ell+1) <rho>^-2 + V,
// discretized in flux form on the grid, Dirichlet rows at both ends.
// Symmetric in the w-inner product <u,v>_w = sum u v w h by construction.
struct SectorOperator {
  int ell = 0;
  RadialGrid grid;
  std::vector<double> weight;     // w_i
  std::vector<double> flux_half;  // a(rho_i + h/2), size n-1
  std::vector<double> pot;        // V - ell(ell+1)/<rho>^2 per node

  // action on a grid function; boundary entries of the result are 0
  std::vector<double> apply(const std::vector<double>& u) const;

  // symmetrized interior tridiagonal (similarity by diag(sqrt(w h)))
  void symmetric_tridiagonal(std::vector<double>& d, std::vector<double>& e) const;

  double inner_w(const std::vector<double>& u, const std::vector<double>& v) const;
  double norm_w(const std::vector<double>& u) const;
  // w-norm over interior nodes only (for fields that ignore the Dirichlet rows)
  double norm_w_interior(const std::vector<double>& u) const;
};

SectorOperator assemble(int ell, const GeometryBundle& geom);

struct SpectrumReport {
  int ell = 0;
  std::vector<double> eigenvalues;        // top slice, ascending
  std::optional<double> mu2;              // positive eigenvalue of H_0, if present
  std::optional<double> mu2_shooting;     // cross-check by two-sided shooting
  std::vector<double> phi_mu;             // w-normalized, full grid
  int positive_count = 0;                 // eigenvalues above threshold
  std::optional<double> kernel_shadow;    // ell=1 only: truncation shadow of nu0
  double kernel_residual_h1_nu0 = 0.0;    // ||H_1 nu0||_w, interior
  double kernel_residual_h0_phi_odd = 0.0;
  double kernel_residual_h0_phi_even = 0.0;
};

// Positive-eigenvalue threshold used throughout.
inline constexpr double kSpectralTol = 1e-6;

// Spectrum of a sector. For ell = 1 the positive count is taken on the
// w-orthogonal complement of the explicit kernel nu0 (the raw truncated
// problem carries a +O(rho_max^-2) shadow of the kernel, reported
// separately as kernel_shadow). For ell = 0 the report carries mu^2, its
// eigenfunction, and the shooting cross-check.
SpectrumReport sector_spectrum(const SectorOperator& op, const GeometryBundle& geom,
                               int n_eigenvalues = 6);

// independent route to mu^2: decaying two-sided recurrence on the same
// stencil, derivative match at rho = 0, bisection in mu^2
double mu2_by_shooting(const SectorOperator& op, double lo = kSpectralTol, double hi = 6.0);

struct WeightedNorm {
  double p = 2.0;
  int s = 0;
  double gamma = 0.0;
  double value = 0.0;
};

// Dyadic-shell Sobolev norm of a sector field: ell^p over shells
// A_k = {2^k <= |rho| <= 2^(k+1)} (A_0 = {|rho| <= 2}) of
// 2^(k gamma) * || 2^(k|alpha|) d^alpha psi ||_L2(A_k), |alpha| <= s.
// Angular derivatives act per sector as sqrt(ell(ell+1))/<rho>.
WeightedNorm weighted_norm(const std::vector<double>& field, int ell, const GeometryBundle& geom,
                           double p, int s, double gamma);

// ell^infty shell profile for the s=0 piece (diagnostics/tests)
std::vector<double> shell_profile(const std::vector<double>& field, const GeometryBundle& geom,
                                  double gamma);

struct CoercivityProbe {
  double quad_form = 0.0;      // <-H phi, phi>_w
  double pairing_mu = 0.0;     // |<phi, Z_mu>_w|
  double pairing_kernel = 0.0; // sum_i |<phi, Z_i>_w| (ell=1 content)
  double grad_norm = 0.0;      // ||d_Sigma phi||_w
  double ratio = 0.0;          // grad / (R^(1/2)|quad|^(1/2) + R^(1/2)|Z_mu| + sum|Z_i|)
  double sobolev_lhs = 0.0;    // ||phi||_{l^inf H^{s+2,-3/2}}
  double sobolev_rhs = 0.0;    // ||H phi|| terms + pairings
  double sobolev_ratio = 0.0;
};

// Numerical margins for the coercivity and weighted-Sobolev estimates on a
// sample field living in one sector. R_ctf scales the cutoff in the
// truncated pairing vectors.
CoercivityProbe coercivity_probe(const std::vector<double>& field, int ell,
                                 const GeometryBundle& geom, const SpectrumReport& h0_spectrum,
                                 double r_ctf);

// C^2 bump: 1 on [0, R], quintic smoothstep down to 0 on [R, 2R]
double cutoff_bump(double rho, double r_ctf);

}  // namespace catenoid

#endif
