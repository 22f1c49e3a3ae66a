#ifndef CATENOID_MODULATION_HPP
#define CATENOID_MODULATION_HPP

#include <array>
#include <vector>

#include "catenoid/geometry.hpp"
#include "catenoid/operators.hpp"

namespace catenoid {

// First-order variables at zero boost: psidot = sqrt|h| (h^-1)^00 d_t psi
// = -w d_t psi. Angular factors are L2(S^2)-normalized throughout, so the
// three ell=1 directions are identical copies of one radial problem.
struct FirstOrderVector {
  int ell = 0;
  std::vector<double> psi;
  std::vector<double> psidot;
};

FirstOrderVector make_first_order(const GeometryBundle& geom, int ell,
                                  const std::vector<double>& psi,
                                  const std::vector<double>& dpsi_dt);

// symplectic pairing Omega(u, v) = int (u vdot - udot v) drho, trapezoid rule
double pair(const RadialGrid& grid, const FirstOrderVector& u, const FirstOrderVector& v);

// Truncated eigenvectors. Z_1..Z_3 = (chi nu0, 0) per direction,
// Z_4..Z_6 = (0, -w chi nu0); Z_pm = c (chi phi_mu, -+ mu w chi phi_mu)
// with c fixed so Omega(Z_+, Z_-) = 1 on this grid.
struct DMatrix {
  std::array<std::array<double, 3>, 3> d{};
  double determinant = 0.0;
};

struct ZVectors {
  double r_ctf = 8.0;
  double mu = 0.0;
  FirstOrderVector z_kernel;   // Z_i radial content (ell = 1)
  FirstOrderVector z_gkernel;  // Z_{3+i} radial content (ell = 1)
  FirstOrderVector z_plus;     // ell = 0
  FirstOrderVector z_minus;    // ell = 0
  double normalization_c = 0.0;
  double kernel_mass = 0.0;    // int chi nu0^2 w drho (trapezoid)
  std::vector<double> chi;     // cutoff per node
  DMatrix d;                   // translation pairing matrix at this cutoff
};

ZVectors make_zvectors(const GeometryBundle& geom, const SpectrumReport& h0_spectrum,
                       double r_ctf);

// a+ = Omega(psi, Z_-), a- = -Omega(psi, Z_+)
std::pair<double, double> project_unstable(const GeometryBundle& geom, const ZVectors& zv,
                                           const FirstOrderVector& state);

// translation/boost pair (c1, c4) in one ell=1 direction, defined by
// Omega(state - c1 phi_1 - c4 phi_4, Z_1) = Omega(..., Z_4) = 0
std::pair<double, double> project_kernel(const GeometryBundle& geom, const ZVectors& zv,
                                         const FirstOrderVector& state);

struct ModulationRecord {
  double time = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  std::array<double, 6> omega{};  // Omega(psi, Z_k), k = 1..6
  DMatrix d_matrix;               // time-independent at zero boost
};

ModulationRecord modulation_record(const GeometryBundle& geom, const ZVectors& zv,
                                   const FirstOrderVector& ell0, const FirstOrderVector& ell1,
                                   double time);

// d_ij = delta_ij (-int chi nu0^2 w drho) by adaptive quadrature of the
// closed forms; off-diagonals vanish by angular orthogonality.
DMatrix d_matrix(double r_ctf);

// improper-integral oracle: int_R nu0^2 w drho over the whole line
double kernel_mass_limit();
// exact cutoff tail: int (1 - chi_{R}) nu0^2 w drho
double kernel_mass_tail(double r_ctf);

// first-order operator at zero boost, M(psi, psidot) = (-psidot/w, -w H_1 psi)
FirstOrderVector apply_m(const GeometryBundle& geom, const SectorOperator& h_ell,
                         const FirstOrderVector& v);

// ||(u, udot)||^2 = ||u||_w^2 + ||udot / w||_w^2, interior nodes
double first_order_norm(const GeometryBundle& geom, const FirstOrderVector& v);

struct KernelResiduals {
  double m_phi1 = 0.0;           // ||M phi_1||, untruncated
  double m_phi4_minus_phi1 = 0.0;  // ||M phi_4 - phi_1||
  double truncated_residual = 0.0;  // ||M Z_1||
  double truncated_residual_le_star = 0.0;
  bool residual_confined = false;  // support inside {R_ctf <= |rho| <= 2 R_ctf}
};

KernelResiduals generalized_kernel_residuals(const GeometryBundle& geom, const ZVectors& zv);

}  // namespace catenoid

#endif
