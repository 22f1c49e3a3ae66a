#include "catenoid/darboux.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace catenoid {

namespace {

// centered derivative with zero Dirichlet ghosts
std::vector<double> centered_zero_ghost(const std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double fp = i + 1 < n ? f[i + 1] : 0.0;
    const double fm = i - 1 >= 0 ? f[i - 1] : 0.0;
    d[i] = (fp - fm) / (2.0 * h);
  }
  return d;
}

}  // namespace

DarbouxContext make_darboux_context(const GeometryBundle& geom) {
  DarbouxContext ctx;
  ctx.grid = geom.grid;
  ctx.nu0 = geom.modes.nu0;
  ctx.weight = geom.metric.weight;
  const int n = geom.grid.n_points;
  ctx.y0.resize(n);
  ctx.sqrt_grr.resize(n);
  ctx.q.resize(n);
  for (int i = 0; i < n; ++i) {
    const double rho = geom.grid.node(i);
    ctx.q[i] = std::sqrt(closed::weight(rho));
    ctx.y0[i] = ctx.q[i] * ctx.nu0[i];
    ctx.sqrt_grr[i] = std::sqrt(closed::g_upper_rr(rho));
  }
  for (double v : ctx.y0)
    if (!(v > 0.0)) throw std::runtime_error("darboux: y0 must stay positive");

  // discrete Vtilde: apply the conjugated partner to the constant function;
  // Delta_rho annihilates constants, so whatever is left is the potential.
  // -D D*(q) / q, all in the line picture
  std::vector<double> tmp(n), res(n);
  {
    // D* q
    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) sq[i] = ctx.sqrt_grr[i] * ctx.y0[i] * ctx.q[i];
    std::vector<double> dsq = centered_zero_ghost(sq, geom.grid.h);
    for (int i = 0; i < n; ++i) tmp[i] = -dsq[i] / ctx.y0[i];
    // D tmp
    std::vector<double> ty(n);
    for (int i = 0; i < n; ++i) ty[i] = tmp[i] / ctx.y0[i];
    std::vector<double> dty = centered_zero_ghost(ty, geom.grid.h);
    for (int i = 0; i < n; ++i) res[i] = ctx.sqrt_grr[i] * ctx.y0[i] * dty[i];
  }
  ctx.transformed_potential.resize(n);
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    ctx.transformed_potential[i] = -res[i] / ctx.q[i];
    const double rho = geom.grid.node(i);
    // boundary rows feel the ghost truncation; skip the outermost few nodes
    if (std::abs(rho) >= 20.0 && i > 2 && i + 3 < n) {
      const double weighted = std::abs(ctx.transformed_potential[i]) *
                              closed::jap2(rho) * closed::jap2(rho);
      sup = std::max(sup, weighted);
    }
  }
  ctx.vtilde_decay_constant = sup;
  return ctx;
}

std::vector<double> darboux_apply(const DarbouxContext& ctx, const std::vector<double>& field,
                                  int ell) {
  if (ell != 1) return field;
  const int n = ctx.grid.n_points;
  const double h = ctx.grid.h;
  std::vector<double> ratio(n);
  for (int i = 0; i < n; ++i) ratio[i] = field[i] / ctx.nu0[i];
  std::vector<double> out(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) out[i] = ctx.nu0[i] * (ratio[i + 1] - ratio[i - 1]) / (2.0 * h);
  // one-sided second-order rows at the ends
  out[0] = ctx.nu0[0] * (-3.0 * ratio[0] + 4.0 * ratio[1] - ratio[2]) / (2.0 * h);
  out[n - 1] = ctx.nu0[n - 1] * (3.0 * ratio[n - 1] - 4.0 * ratio[n - 2] + ratio[n - 3]) / (2.0 * h);
  return out;
}

std::map<int, std::vector<double>> darboux_apply(const DarbouxContext& ctx,
                                                 const std::map<int, std::vector<double>>& fields) {
  std::map<int, std::vector<double>> out;
  for (const auto& [ell, f] : fields) out[ell] = darboux_apply(ctx, f, ell);
  return out;
}

std::vector<double> d_line(const DarbouxContext& ctx, const std::vector<double>& phi) {
  const int n = ctx.grid.n_points;
  std::vector<double> ratio(n);
  for (int i = 0; i < n; ++i) ratio[i] = phi[i] / ctx.y0[i];
  std::vector<double> d = centered_zero_ghost(ratio, ctx.grid.h);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = ctx.sqrt_grr[i] * ctx.y0[i] * d[i];
  return out;
}

std::vector<double> dstar_line(const DarbouxContext& ctx, const std::vector<double>& phi) {
  const int n = ctx.grid.n_points;
  std::vector<double> sf(n);
  for (int i = 0; i < n; ++i) sf[i] = ctx.sqrt_grr[i] * ctx.y0[i] * phi[i];
  std::vector<double> d = centered_zero_ghost(sf, ctx.grid.h);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = -d[i] / ctx.y0[i];
  return out;
}

double factorization_defect(const DarbouxContext& ctx, const GeometryBundle& geom,
                            const std::vector<std::vector<double>>& samples) {
  SectorOperator h1 = assemble(1, geom);
  const int n = ctx.grid.n_points;
  double worst = 0.0;
  for (const auto& phi : samples) {
    // line-picture L1 via the sector operator: L1 phi = q H1(q^-1 phi)
    std::vector<double> qinv(n);
    for (int i = 0; i < n; ++i) qinv[i] = phi[i] / ctx.q[i];
    std::vector<double> l1 = h1.apply(qinv);
    for (int i = 0; i < n; ++i) l1[i] *= ctx.q[i];
    std::vector<double> dd = dstar_line(ctx, d_line(ctx, phi));
    double num = 0.0, den = 0.0;
    for (int i = 2; i + 2 < n; ++i) {
      num = std::max(num, std::abs(l1[i] + dd[i]));
      den = std::max(den, std::abs(phi[i]));
    }
    if (den > 0.0) worst = std::max(worst, num / den);
  }
  return worst;
}

TransformedOperatorReport transformed_operator(const DarbouxContext& ctx) {
  const int n = ctx.grid.n_points;
  const double h = ctx.grid.h;
  TransformedOperatorReport rep;

  // D as a sparse two-band action: (D phi)_i = s_i y_i (phi_{i+1}/y_{i+1} - phi_{i-1}/y_{i-1})/(2h)
  // -D D^T assembled directly in banded storage (bandwidth 2).
  std::vector<double> cp(n, 0.0), cm(n, 0.0);  // D_{i,i+1}, D_{i,i-1}
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) cp[i] = ctx.sqrt_grr[i] * ctx.y0[i] / (2.0 * h * ctx.y0[i + 1]);
    if (i - 1 >= 0) cm[i] = -ctx.sqrt_grr[i] * ctx.y0[i] / (2.0 * h * ctx.y0[i - 1]);
  }
  SymmetricBanded A(n, 2);
  // (D D^T)_{jk} = sum_i D_{ij} D_{ik}; rows of D touch columns i-1, i+1
  for (int j = 0; j < n; ++j) {
    // diagonal: contributions from rows j-1 (via cp) and j+1 (via cm)
    double diag = 0.0;
    if (j - 1 >= 0) diag += cp[j - 1] * cp[j - 1];
    if (j + 1 < n) diag += cm[j + 1] * cm[j + 1];
    A.at(j, j) = -diag;
    // offdiag (j, j+2): row j+1 sees columns j (cm) and j+2 (cp)
    if (j + 2 < n) A.at(j, j + 2) = -cm[j + 1] * cp[j + 1];
    // offdiag (j, j+1): no row touches both (parity), stays 0
  }
  rep.line_matrix = A;
  rep.eigencount_above_tol = banded_count_above(A, kSpectralTol);
  for (int k = 0; k < 4; ++k)
    rep.top_eigenvalues.push_back(banded_eigenvalue_by_index(A, n - 1 - k));

  // symmetry of the conjugated-back operator in the w-inner product
  std::mt19937_64 rng(0xDA5B00);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u[i] = uni(rng);
    v[i] = uni(rng);
  }
  auto conj_apply = [&](const std::vector<double>& x) {
    std::vector<double> qx(n);
    for (int i = 0; i < n; ++i) qx[i] = ctx.q[i] * x[i];
    std::vector<double> ax = A.apply(qx);
    for (int i = 0; i < n; ++i) ax[i] /= ctx.q[i];
    return ax;
  };
  std::vector<double> Au = conj_apply(u), Av = conj_apply(v);
  double p1 = 0.0, p2 = 0.0, scale = 0.0;
  for (int i = 0; i < n; ++i) {
    p1 += Au[i] * v[i] * ctx.weight[i] * h;
    p2 += u[i] * Av[i] * ctx.weight[i] * h;
    scale += std::abs(Au[i] * v[i]) * ctx.weight[i] * h;
  }
  rep.symmetry_defect = std::abs(p1 - p2) / std::max(1.0, scale);
  rep.vtilde_decay_constant = ctx.vtilde_decay_constant;
  return rep;
}

std::vector<double> to_transformed_normalization(const DarbouxContext& ctx,
                                                 const std::vector<double>& applied) {
  std::vector<double> u = applied;
  for (int i = 0; i < ctx.grid.n_points; ++i) u[i] *= ctx.sqrt_grr[i];
  return u;
}

std::vector<double> darboux_invert(const DarbouxContext& ctx, const std::vector<double>& u,
                                   double pairing_datum, double r_ctf) {
  const int n = ctx.grid.n_points;
  const int c = ctx.grid.center();
  const double h = ctx.grid.h;

  // cumulative trapezoid of nu0^-1 u sqrt(g_rr) from rho = 0
  std::vector<double> integrand(n), cum(n, 0.0);
  for (int i = 0; i < n; ++i) integrand[i] = u[i] / (ctx.nu0[i] * ctx.sqrt_grr[i]);
  for (int i = c + 1; i < n; ++i)
    cum[i] = cum[i - 1] + 0.5 * h * (integrand[i] + integrand[i - 1]);
  for (int i = c - 1; i >= 0; --i)
    cum[i] = cum[i + 1] - 0.5 * h * (integrand[i] + integrand[i + 1]);

  std::vector<double> particular(n);
  for (int i = 0; i < n; ++i) particular[i] = ctx.nu0[i] * cum[i];

  // c0 from the pairing datum against Z0 = chi nu0 in the w-inner product
  double z_nu = 0.0, z_part = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z0 = cutoff_bump(ctx.grid.node(i), r_ctf) * ctx.nu0[i];
    z_nu += z0 * ctx.nu0[i] * ctx.weight[i] * h;
    z_part += z0 * particular[i] * ctx.weight[i] * h;
  }
  if (std::abs(z_nu) < 1e-14)
    throw std::runtime_error("darboux_invert: degenerate pairing <nu0, Z0>");
  const double c0 = (pairing_datum - z_part) / z_nu;
  for (int i = 0; i < n; ++i) particular[i] += c0 * ctx.nu0[i];
  return particular;
}

}  // namespace catenoid
