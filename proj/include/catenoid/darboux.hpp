#ifndef CATENOID_DARBOUX_HPP
#define CATENOID_DARBOUX_HPP

#include <map>
#include <vector>

#include "catenoid/geometry.hpp"
#include "catenoid/operators.hpp"
#include "catenoid/spectral.hpp"

namespace catenoid {

// First-order intertwining that removes the slowly decaying ell=1 kernel.
// Line picture: conjugate by q = |g|^(1/4); y0 = q nu0 is the kernel of the
// conjugated operator L1, which factorizes as L1 = -D* D with
//   D  = sqrt(g^rr) y0 d/drho y0^-1,
//   D* = -y0^-1 d/drho sqrt(g^rr) y0   (exact discrete adjoint of D).
// The partner -D D* conjugates back to Delta_rho + Vtilde; for this
// geometry q is annihilated by D* so the exact Vtilde vanishes, and the
// stored per-node values measure the discretization floor.
struct DarbouxContext {
  RadialGrid grid;
  std::vector<double> nu0;
  std::vector<double> y0;          // |g|^(1/4) nu0
  std::vector<double> sqrt_grr;    // sqrt(g^rr)
  std::vector<double> q;           // |g|^(1/4)
  std::vector<double> weight;      // w = |g|^(1/2)
  std::vector<double> transformed_potential;  // discrete Vtilde
  double vtilde_decay_constant = 0.0;         // sup |Vtilde| <rho>^4 on |rho| in [20, rho_max]
};

DarbouxContext make_darboux_context(const GeometryBundle& geom);

// sector transform of eq-type nu0 d/drho(nu0^-1 .): identity off ell=1
std::vector<double> darboux_apply(const DarbouxContext& ctx, const std::vector<double>& field,
                                  int ell);

// map over sectors
std::map<int, std::vector<double>> darboux_apply(const DarbouxContext& ctx,
                                                 const std::map<int, std::vector<double>>& fields);

// line-picture operators as matrix actions (centered stencil, zero ghosts)
std::vector<double> d_line(const DarbouxContext& ctx, const std::vector<double>& phi);
std::vector<double> dstar_line(const DarbouxContext& ctx, const std::vector<double>& phi);

// max over samples of ||L1 phi + D*D phi||_inf / ||phi||_inf
double factorization_defect(const DarbouxContext& ctx, const GeometryBundle& geom,
                            const std::vector<std::vector<double>>& samples);

struct TransformedOperatorReport {
  SymmetricBanded line_matrix;      // -D D^T, pentadiagonal
  int eigencount_above_tol = 0;     // against kSpectralTol
  std::vector<double> top_eigenvalues;  // few largest
  double symmetry_defect = 0.0;     // w-pairing defect of the conjugated form
  double vtilde_decay_constant = 0.0;
};

TransformedOperatorReport transformed_operator(const DarbouxContext& ctx);

// Reconstruction of the ell=1 field from the transformed field u (line
// normalization, u = sqrt(g^rr) nu0 d/drho(nu0^-1 psi)) and the pairing
// datum <psi, Z0>_w with Z0 = chi_{R_ctf} nu0:
//   psi = c0 nu0 + nu0 int_0^rho nu0^-1 u sqrt(g_rr) drho'.
std::vector<double> darboux_invert(const DarbouxContext& ctx, const std::vector<double>& u,
                                   double pairing_datum, double r_ctf);

// apply-output -> invert-input conversion (the sqrt(g^rr) factor)
std::vector<double> to_transformed_normalization(const DarbouxContext& ctx,
                                                 const std::vector<double>& applied);

}  // namespace catenoid

#endif
