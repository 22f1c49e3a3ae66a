#include "catenoid/modulation.hpp"

#include <cmath>
#include <stdexcept>

#include "catenoid/evolution.hpp"
#include "catenoid/quadrature.hpp"

namespace catenoid {

namespace {

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

}  // namespace

FirstOrderVector make_first_order(const GeometryBundle& geom, int ell,
                                  const std::vector<double>& psi,
                                  const std::vector<double>& dpsi_dt) {
  FirstOrderVector v;
  v.ell = ell;
  v.psi = psi;
  v.psidot.resize(psi.size());
  for (size_t i = 0; i < psi.size(); ++i) v.psidot[i] = -geom.metric.weight[i] * dpsi_dt[i];
  return v;
}

double pair(const RadialGrid& grid, const FirstOrderVector& u, const FirstOrderVector& v) {
  if (u.ell != v.ell) throw std::invalid_argument("pair: sector mismatch");
  if (u.psi.size() != v.psi.size()) throw std::invalid_argument("pair: grid mismatch");
  std::vector<double> f(u.psi.size());
  for (size_t i = 0; i < f.size(); ++i)
    f[i] = u.psi[i] * v.psidot[i] - u.psidot[i] * v.psi[i];
  return trapezoid(f, grid.h);
}

ZVectors make_zvectors(const GeometryBundle& geom, const SpectrumReport& h0_spectrum,
                       double r_ctf) {
  if (!h0_spectrum.mu2 || h0_spectrum.phi_mu.empty())
    throw std::invalid_argument("make_zvectors: needs the ell=0 spectrum with phi_mu");
  const int n = geom.grid.n_points;
  ZVectors zv;
  zv.r_ctf = r_ctf;
  zv.mu = std::sqrt(*h0_spectrum.mu2);
  zv.chi.resize(n);
  for (int i = 0; i < n; ++i) zv.chi[i] = cutoff_bump(geom.grid.node(i), r_ctf);

  zv.z_kernel.ell = 1;
  zv.z_kernel.psi.resize(n);
  zv.z_kernel.psidot.assign(n, 0.0);
  zv.z_gkernel.ell = 1;
  zv.z_gkernel.psi.assign(n, 0.0);
  zv.z_gkernel.psidot.resize(n);
  for (int i = 0; i < n; ++i) {
    const double cn = zv.chi[i] * geom.modes.nu0[i];
    zv.z_kernel.psi[i] = cn;
    zv.z_gkernel.psidot[i] = -geom.metric.weight[i] * cn;
  }

  // Omega(Z+, Z-) = c^2 2 mu int chi^2 phi_mu^2 w drho = 1
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) {
    const double cp = zv.chi[i] * h0_spectrum.phi_mu[i];
    q[i] = cp * cp * geom.metric.weight[i];
  }
  const double mass = trapezoid(q, geom.grid.h);
  zv.normalization_c = 1.0 / std::sqrt(2.0 * zv.mu * mass);

  zv.z_plus.ell = 0;
  zv.z_minus.ell = 0;
  zv.z_plus.psi.resize(n);
  zv.z_plus.psidot.resize(n);
  zv.z_minus.psi.resize(n);
  zv.z_minus.psidot.resize(n);
  for (int i = 0; i < n; ++i) {
    const double cp = zv.normalization_c * zv.chi[i] * h0_spectrum.phi_mu[i];
    zv.z_plus.psi[i] = cp;
    zv.z_plus.psidot[i] = -zv.mu * geom.metric.weight[i] * cp;
    zv.z_minus.psi[i] = cp;
    zv.z_minus.psidot[i] = zv.mu * geom.metric.weight[i] * cp;
  }

  std::vector<double> km(n);
  for (int i = 0; i < n; ++i)
    km[i] = zv.chi[i] * geom.modes.nu0[i] * geom.modes.nu0[i] * geom.metric.weight[i];
  zv.kernel_mass = trapezoid(km, geom.grid.h);
  zv.d = d_matrix(r_ctf);
  return zv;
}

std::pair<double, double> project_unstable(const GeometryBundle& geom, const ZVectors& zv,
                                           const FirstOrderVector& state) {
  const double ap = pair(geom.grid, state, zv.z_minus);
  const double am = -pair(geom.grid, state, zv.z_plus);
  return {ap, am};
}

std::pair<double, double> project_kernel(const GeometryBundle& geom, const ZVectors& zv,
                                         const FirstOrderVector& state) {
  const double c4 = pair(geom.grid, state, zv.z_kernel) / zv.kernel_mass;
  const double c1 = -pair(geom.grid, state, zv.z_gkernel) / zv.kernel_mass;
  return {c1, c4};
}

ModulationRecord modulation_record(const GeometryBundle& geom, const ZVectors& zv,
                                   const FirstOrderVector& ell0, const FirstOrderVector& ell1,
                                   double time) {
  ModulationRecord rec;
  rec.time = time;
  auto [ap, am] = project_unstable(geom, zv, ell0);
  rec.a_plus = ap;
  rec.a_minus = am;
  const double o1 = pair(geom.grid, ell1, zv.z_kernel);
  const double o4 = pair(geom.grid, ell1, zv.z_gkernel);
  // the three Cartesian directions coincide at zero boost
  rec.omega = {o1, o1, o1, o4, o4, o4};
  rec.d_matrix = zv.d;
  return rec;
}

DMatrix d_matrix(double r_ctf) {
  if (r_ctf < 4.0) throw std::invalid_argument("d_matrix: R_ctf >= 4 required");
  auto integrand = [r_ctf](double rho) {
    const double n = closed::nu0(rho);
    return cutoff_bump(rho, r_ctf) * n * n * closed::weight(rho);
  };
  QuadResult q = integrate(integrand, 0.0, 2.0 * r_ctf, 1e-12);
  const double diag = -2.0 * q.value;  // sqrt|h| (h^-1)^00 = -w; both ends
  DMatrix m;
  for (int i = 0; i < 3; ++i) m.d[i][i] = diag;
  m.determinant = diag * diag * diag;
  if (std::abs(m.determinant) < 1e-12)
    throw std::runtime_error("d_matrix: singular (R_ctf too small)");
  return m;
}

double kernel_mass_limit() {
  auto integrand = [](double rho) {
    // nu0^2 w = 1 / (<rho> sqrt(2 + rho^2)), written overflow-safe
    return 1.0 / (std::sqrt(1.0 + rho * rho) * std::sqrt(2.0 + rho * rho));
  };
  QuadResult q = integrate_to_infinity(integrand, 0.0, 1e-12);
  return 2.0 * q.value;
}

double kernel_mass_tail(double r_ctf) {
  auto integrand = [r_ctf](double rho) {
    return (1.0 - cutoff_bump(rho, r_ctf)) /
           (std::sqrt(1.0 + rho * rho) * std::sqrt(2.0 + rho * rho));
  };
  QuadResult q = integrate_to_infinity(integrand, r_ctf, 1e-12);
  return 2.0 * q.value;
}

FirstOrderVector apply_m(const GeometryBundle& geom, const SectorOperator& h_ell,
                         const FirstOrderVector& v) {
  const int n = geom.grid.n_points;
  FirstOrderVector out;
  out.ell = v.ell;
  out.psi.resize(n);
  out.psidot.resize(n);
  std::vector<double> hv = h_ell.apply(v.psi);
  for (int i = 0; i < n; ++i) {
    out.psi[i] = -v.psidot[i] / geom.metric.weight[i];
    out.psidot[i] = -geom.metric.weight[i] * hv[i];
  }
  return out;
}

double first_order_norm(const GeometryBundle& geom, const FirstOrderVector& v) {
  const int n = geom.grid.n_points;
  double acc = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double w = geom.metric.weight[i];
    const double vdot = v.psidot[i] / w;
    acc += (v.psi[i] * v.psi[i] + vdot * vdot) * w * geom.grid.h;
  }
  return std::sqrt(acc);
}

KernelResiduals generalized_kernel_residuals(const GeometryBundle& geom, const ZVectors& zv) {
  KernelResiduals out;
  SectorOperator h1 = assemble(1, geom);
  const int n = geom.grid.n_points;

  FirstOrderVector phi1{1, geom.modes.nu0, std::vector<double>(n, 0.0)};
  FirstOrderVector phi4{1, std::vector<double>(n, 0.0), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) phi4.psidot[i] = -geom.metric.weight[i] * geom.modes.nu0[i];

  out.m_phi1 = first_order_norm(geom, apply_m(geom, h1, phi1));
  FirstOrderVector m4 = apply_m(geom, h1, phi4);
  for (int i = 0; i < n; ++i) {
    m4.psi[i] -= phi1.psi[i];
    m4.psidot[i] -= phi1.psidot[i];
  }
  out.m_phi4_minus_phi1 = first_order_norm(geom, m4);

  FirstOrderVector mz = apply_m(geom, h1, zv.z_kernel);
  out.truncated_residual = first_order_norm(geom, mz);

  // cutoff commutator [H_1, chi] nu0: the piece of M Z_1 beyond the interior
  // discretization floor chi * (M phi_1). Where chi is constant across the
  // stencil this vanishes identically, so its support is the transition band.
  std::vector<double> h_chi_nu0 = h1.apply(zv.z_kernel.psi);
  std::vector<double> h_nu0 = h1.apply(geom.modes.nu0);
  std::vector<double> commutator(n, 0.0);
  for (int i = 0; i < n; ++i) commutator[i] = h_chi_nu0[i] - zv.chi[i] * h_nu0[i];
  out.truncated_residual_le_star = std::sqrt(le_star_sector(geom, commutator, 0.1));

  out.residual_confined = true;
  for (int i = 1; i + 1 < n; ++i) {
    const double a = std::abs(geom.grid.node(i));
    const bool transition =
        a >= zv.r_ctf - 2.0 * geom.grid.h && a <= 2.0 * zv.r_ctf + 2.0 * geom.grid.h;
    if (!transition && std::abs(commutator[i]) > 1e-13) out.residual_confined = false;
  }
  return out;
}

}  // namespace catenoid
