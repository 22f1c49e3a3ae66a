#include "catenoid/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "catenoid/spectral.hpp"

namespace catenoid {

std::vector<double> SectorOperator::apply(const std::vector<double>& u) const {
  const int n = grid.n_points;
  const double h2 = grid.h * grid.h;
  std::vector<double> out(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    const double fluxed =
        flux_half[i] * (u[i + 1] - u[i]) - flux_half[i - 1] * (u[i] - u[i - 1]);
    out[i] = fluxed / (h2 * weight[i]) + pot[i] * u[i];
  }
  return out;
}

void SectorOperator::symmetric_tridiagonal(std::vector<double>& d, std::vector<double>& e) const {
  const int n = grid.n_points;
  const double h2 = grid.h * grid.h;
  d.assign(n - 2, 0.0);
  e.assign(n - 3, 0.0);
  for (int i = 1; i + 1 < n; ++i)
    d[i - 1] = pot[i] - (flux_half[i] + flux_half[i - 1]) / (h2 * weight[i]);
  for (int i = 1; i + 2 < n; ++i)
    e[i - 1] = flux_half[i] / (h2 * std::sqrt(weight[i] * weight[i + 1]));
}

double SectorOperator::inner_w(const std::vector<double>& u, const std::vector<double>& v) const {
  double s = 0.0;
  for (int i = 0; i < grid.n_points; ++i) s += u[i] * v[i] * weight[i];
  return s * grid.h;
}

double SectorOperator::norm_w(const std::vector<double>& u) const {
  return std::sqrt(inner_w(u, u));
}

double SectorOperator::norm_w_interior(const std::vector<double>& u) const {
  double s = 0.0;
  for (int i = 1; i + 1 < grid.n_points; ++i) s += u[i] * u[i] * weight[i];
  return std::sqrt(s * grid.h);
}

SectorOperator assemble(int ell, const GeometryBundle& geom) {
  if (ell < 0) throw std::invalid_argument("assemble: ell must be non-negative");
  SectorOperator op;
  op.ell = ell;
  op.grid = geom.grid;
  op.weight = geom.metric.weight;
  const int n = geom.grid.n_points;
  op.flux_half.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i)
    op.flux_half[i] = closed::flux(geom.grid.node(i) + 0.5 * geom.grid.h);
  op.pot.resize(n);
  const double ll1 = static_cast<double>(ell) * (ell + 1);
  for (int i = 0; i < n; ++i)
    op.pot[i] = geom.pot.values[i] - ll1 * geom.metric.inv_rho2[i];
  return op;
}

double mu2_by_shooting(const SectorOperator& op, double lo, double hi) {
  const int n = op.grid.n_points;
  const int c = op.grid.center();
  const double h2 = op.grid.h * op.grid.h;

  // three-term recurrence of the same flux-form stencil, launched from the
  // Dirichlet closure at each end where the eigenfunction is ~e^(-mu rho_max);
  // integration runs toward the center, the growing (stable) direction.
  // The match function is the residual of the stencil row at rho = 0 after
  // the two branches are scaled to agree there, so its roots are exactly the
  // eigenvalues of the matrix route while the algorithm stays an IVP sweep.
  auto mismatch = [&](double lambda) {
    auto sweep = [&](int from, int step) {
      // u[from] = 0 (boundary), u[from+step] = 1
      double um = 0.0, u = 1.0;
      int i = from + step;
      while (i != c) {
        // flux-form row at node i solved for the value at i+step
        const double a_known = step > 0 ? op.flux_half[i - 1] : op.flux_half[i];
        const double a_next = step > 0 ? op.flux_half[i] : op.flux_half[i - 1];
        const double rhs = (lambda - op.pot[i]) * u * h2 * op.weight[i];
        const double unext = (rhs + (a_next + a_known) * u - a_known * um) / a_next;
        um = u;
        u = unext;
        if (std::abs(u) > 1e250) {  // rescale; only ratios matter
          um /= u;
          u = 1.0;
        }
        i += step;
      }
      return std::pair<double, double>(u, um);  // value at c, value one node out
    };
    auto [ul, ul_prev] = sweep(0, +1);
    auto [ur, ur_prev] = sweep(n - 1, -1);
    const double ucp1 = ur_prev * (ul / ur);  // right branch rescaled to match at c
    const double ap = op.flux_half[c], am = op.flux_half[c - 1];
    return ap * (ucp1 - ul) - am * (ul - ul_prev) + (op.pot[c] - lambda) * ul * h2 * op.weight[c];
  };

  double flo = mismatch(lo), fhi = mismatch(hi);
  if (flo * fhi > 0.0)
    throw std::runtime_error("mu2_by_shooting: no sign change in bracket (grid under-resolved?)");
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = mismatch(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

SpectrumReport sector_spectrum(const SectorOperator& op, const GeometryBundle& geom,
                               int n_eigenvalues) {
  SpectrumReport rep;
  rep.ell = op.ell;
  std::vector<double> d, e;
  op.symmetric_tridiagonal(d, e);
  rep.eigenvalues = top_eigenvalues(d, e, n_eigenvalues);
  const int n_int = static_cast<int>(d.size());

  const int n = op.grid.n_points;
  const double h = op.grid.h;

  // kernel residuals of the explicit zero modes (interior nodes)
  {
    SectorOperator h1 = op.ell == 1 ? op : assemble(1, geom);
    SectorOperator h0 = op.ell == 0 ? op : assemble(0, geom);
    rep.kernel_residual_h1_nu0 = h1.norm_w_interior(h1.apply(geom.modes.nu0));
    rep.kernel_residual_h0_phi_odd = h0.norm_w_interior(h0.apply(geom.modes.phi_odd));
    rep.kernel_residual_h0_phi_even = h0.norm_w_interior(h0.apply(geom.modes.phi_even));
  }

  if (op.ell == 1) {
    // deflate the explicit kernel before counting positives
    std::vector<double> v(n_int);
    double nrm = 0.0;
    for (int i = 0; i < n_int; ++i) {
      v[i] = std::sqrt(op.weight[i + 1] * h) * geom.modes.nu0[i + 1];
      nrm += v[i] * v[i];
    }
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;
    rep.positive_count = count_above_on_complement(d, e, v, kSpectralTol);
    const double top = rep.eigenvalues.back();
    if (top > kSpectralTol) rep.kernel_shadow = top;
  } else {
    rep.positive_count =
        n_int - sturm_count_below(d, e, kSpectralTol);
  }

  if (op.ell == 0 && rep.positive_count >= 1) {
    const double lam = eigenvalue_by_index(d, e, n_int - 1);
    rep.mu2 = lam;
    std::vector<double> y = inverse_iteration(d, e, lam);
    // back to the natural variable, w-normalized, positive at the collar
    rep.phi_mu.assign(n, 0.0);
    for (int i = 0; i < n_int; ++i) rep.phi_mu[i + 1] = y[i] / std::sqrt(op.weight[i + 1] * h);
    const double sgn = rep.phi_mu[op.grid.center()] < 0.0 ? -1.0 : 1.0;
    const double wn = op.norm_w(rep.phi_mu);
    for (auto& x : rep.phi_mu) x *= sgn / wn;
    rep.mu2_shooting = mu2_by_shooting(op);
  }
  return rep;
}

namespace {

int shell_of(double rho) {
  const double a = std::abs(rho);
  if (a <= 2.0) return 0;
  return static_cast<int>(std::floor(std::log2(a)));
}

// d^alpha with alpha = (radial order jr, angular order ja); centered stencils
// inside, one-sided at the ends.
std::vector<double> sector_derivative(const std::vector<double>& f, int jr, int ja, int ell,
                                      const GeometryBundle& geom) {
  const int n = geom.grid.n_points;
  const double h = geom.grid.h;
  std::vector<double> g = f;
  for (int rep = 0; rep < jr; ++rep) {
    std::vector<double> d(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) d[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
    d[0] = (g[1] - g[0]) / h;
    d[n - 1] = (g[n - 1] - g[n - 2]) / h;
    g.swap(d);
  }
  if (ja > 0) {
    const double lam = std::sqrt(static_cast<double>(ell) * (ell + 1));
    for (int i = 0; i < n; ++i)
      g[i] *= std::pow(lam / closed::jap(geom.grid.node(i)), ja);
  }
  return g;
}

}  // namespace

WeightedNorm weighted_norm(const std::vector<double>& field, int ell, const GeometryBundle& geom,
                           double p, int s, double gamma) {
  if (s > 2) throw std::invalid_argument("weighted_norm: stencil order limits s <= 2");
  const int n = geom.grid.n_points;
  const double h = geom.grid.h;
  WeightedNorm out;
  out.p = p;
  out.s = s;
  out.gamma = gamma;

  int kmax = shell_of(geom.grid.rho_max) + 1;
  double total = 0.0;
  for (int jr = 0; jr <= s; ++jr)
    for (int ja = 0; jr + ja <= s; ++ja) {
      const int order = jr + ja;
      std::vector<double> dfield = sector_derivative(field, jr, ja, ell, geom);
      std::vector<double> shell_l2(kmax + 1, 0.0);
      for (int i = 0; i < n; ++i) {
        const int k = std::min(shell_of(geom.grid.node(i)), kmax);
        shell_l2[k] += dfield[i] * dfield[i] * geom.metric.weight[i] * h;
      }
      double acc = 0.0, sup = 0.0;
      for (int k = 0; k <= kmax; ++k) {
        const double term =
            std::pow(2.0, k * gamma) * std::pow(2.0, k * order) * std::sqrt(shell_l2[k]);
        if (std::isinf(p))
          sup = std::max(sup, term);
        else
          acc += std::pow(term, p);
      }
      total += std::isinf(p) ? sup : std::pow(acc, 1.0 / p);
    }
  out.value = total;
  return out;
}

std::vector<double> shell_profile(const std::vector<double>& field, const GeometryBundle& geom,
                                  double gamma) {
  const int n = geom.grid.n_points;
  const double h = geom.grid.h;
  int kmax = shell_of(geom.grid.rho_max) + 1;
  std::vector<double> shell_l2(kmax + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const int k = std::min(shell_of(geom.grid.node(i)), kmax);
    shell_l2[k] += field[i] * field[i] * geom.metric.weight[i] * h;
  }
  std::vector<double> out(kmax + 1);
  for (int k = 0; k <= kmax; ++k) out[k] = std::pow(2.0, k * gamma) * std::sqrt(shell_l2[k]);
  return out;
}

double cutoff_bump(double rho, double r_ctf) {
  const double a = std::abs(rho);
  if (a <= r_ctf) return 1.0;
  if (a >= 2.0 * r_ctf) return 0.0;
  const double s = (a - r_ctf) / r_ctf;
  const double s3 = s * s * s;
  return 1.0 - s3 * (10.0 - 15.0 * s + 6.0 * s * s);
}

CoercivityProbe coercivity_probe(const std::vector<double>& field, int ell,
                                 const GeometryBundle& geom, const SpectrumReport& h0_spectrum,
                                 double r_ctf) {
  CoercivityProbe out;
  SectorOperator op = assemble(ell, geom);
  const int n = geom.grid.n_points;
  std::vector<double> Hphi = op.apply(field);
  out.quad_form = -op.inner_w(Hphi, field);

  // truncated pairing vectors: Z_mu from the computed eigenfunction (ell=0
  // content), Z_i from nu0 (ell=1 content); only the matching sector pairs.
  std::vector<double> zmu(n, 0.0), zker(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double chi = cutoff_bump(geom.grid.node(i), r_ctf);
    if (!h0_spectrum.phi_mu.empty()) zmu[i] = chi * h0_spectrum.phi_mu[i];
    zker[i] = chi * geom.modes.nu0[i];
  }
  out.pairing_mu = ell == 0 ? std::abs(op.inner_w(field, zmu)) : 0.0;
  out.pairing_kernel = ell == 1 ? 3.0 * std::abs(op.inner_w(field, zker)) : 0.0;

  // ||d_Sigma phi||^2 = int (g^rr (d_rho phi)^2 + ell(ell+1)<rho>^-2 phi^2) w
  double grad2 = 0.0;
  const double h = geom.grid.h;
  for (int i = 1; i + 1 < n; ++i) {
    const double dp = (field[i + 1] - field[i - 1]) / (2.0 * h);
    const double rho = geom.grid.node(i);
    grad2 += (closed::g_upper_rr(rho) * dp * dp +
              ell * (ell + 1) * geom.metric.inv_rho2[i] * field[i] * field[i]) *
             geom.metric.weight[i] * h;
  }
  out.grad_norm = std::sqrt(grad2);

  const double rs = std::sqrt(r_ctf);
  const double denom = rs * std::sqrt(std::abs(out.quad_form)) + rs * out.pairing_mu +
                       out.pairing_kernel;
  out.ratio = denom > 0.0 ? out.grad_norm / denom : 0.0;

  // weighted-Sobolev margin with f1 = H phi, f2 = 0, s = 0
  out.sobolev_lhs =
      weighted_norm(field, ell, geom, std::numeric_limits<double>::infinity(), 2, -1.5).value;
  double rhs = weighted_norm(Hphi, ell, geom, 1.0, 0, 0.5).value;
  if (ell == 1) {
    // D_rbx on the ell=1 component of the source
    std::vector<double> dr(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
      const double num = Hphi[i + 1] / geom.modes.nu0[i + 1] - Hphi[i - 1] / geom.modes.nu0[i - 1];
      dr[i] = geom.modes.nu0[i] * num / (2.0 * h);
    }
    rhs += r_ctf * r_ctf * weighted_norm(dr, ell, geom, 1.0, 0, 0.5).value;
  }
  rhs += out.pairing_mu + out.pairing_kernel;
  out.sobolev_rhs = rhs;
  out.sobolev_ratio = rhs > 0.0 ? out.sobolev_lhs / rhs : 0.0;
  return out;
}

}  // namespace catenoid
