#include "catenoid/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace catenoid {

namespace {

double centered(const std::vector<double>& f, int i, double h, int n) {
  if (i == 0) return (f[1] - f[0]) / h;
  if (i == n - 1) return (f[n - 1] - f[n - 2]) / h;
  return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

}  // namespace

double le_density_sector(const GeometryBundle& geom, int ell, const std::vector<double>& psi,
                         const std::vector<double>& dpsi_dt, double alpha) {
  const int n = geom.grid.n_points;
  const double h = geom.grid.h;
  const double ll1 = ell * (ell + 1);
  double acc = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double rho = geom.grid.node(i);
    const double j2 = closed::jap2(rho);
    const double dp = centered(psi, i, h, n);
    const double w = geom.metric.weight[i];
    const double rho2 = rho * rho;
    acc += (std::pow(j2, -0.5 * (1.0 + alpha)) * dp * dp +
            rho2 * std::pow(j2, -0.5 * (3.0 + alpha)) * dpsi_dt[i] * dpsi_dt[i] +
            ll1 * rho2 * std::pow(j2, -2.5) * psi[i] * psi[i] +
            rho2 * std::pow(j2, -0.5 * (5.0 + alpha)) * psi[i] * psi[i]) *
           w * h;
  }
  return acc;
}

double energy_sector(const GeometryBundle& geom, int ell, const std::vector<double>& psi,
                     const std::vector<double>& dpsi_dt, bool include_potential) {
  const int n = geom.grid.n_points;
  const double h = geom.grid.h;
  const double ll1 = ell * (ell + 1);
  double acc = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double rho = geom.grid.node(i);
    const double dp = centered(psi, i, h, n);
    const double w = geom.metric.weight[i];
    double val = dpsi_dt[i] * dpsi_dt[i] + closed::g_upper_rr(rho) * dp * dp +
                 ll1 * geom.metric.inv_rho2[i] * psi[i] * psi[i];
    if (include_potential) val -= geom.pot.values[i] * psi[i] * psi[i];
    acc += val * w * h;
  }
  return acc;
}

double conserved_energy_sector(const GeometryBundle& geom, int ell,
                               const std::vector<double>& psi,
                               const std::vector<double>& dpsi_dt) {
  const int n = geom.grid.n_points;
  const double h = geom.grid.h;
  const double ll1 = ell * (ell + 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double val = dpsi_dt[i] * dpsi_dt[i] +
                 (ll1 * geom.metric.inv_rho2[i] - geom.pot.values[i]) * psi[i] * psi[i];
    acc += val * geom.metric.weight[i] * h;
  }
  for (int i = 0; i + 1 < n; ++i) {
    const double a_half = closed::flux(geom.grid.node(i) + 0.5 * h);
    const double d = psi[i + 1] - psi[i];
    acc += a_half * d * d / h;
  }
  return acc;
}

double le_star_sector(const GeometryBundle& geom, const std::vector<double>& field, double alpha) {
  const int n = geom.grid.n_points;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double j2 = closed::jap2(geom.grid.node(i));
    acc += std::pow(j2, 0.5 * (1.0 + alpha)) * field[i] * field[i] * geom.metric.weight[i] *
           geom.grid.h;
  }
  return acc;
}

double rp_energy_sector(const GeometryBundle& geom, int ell, const std::vector<double>& psi,
                        const std::vector<double>& dpsi_dt, double p, double r_cutoff) {
  (void)ell;
  const int n = geom.grid.n_points;
  const double h = geom.grid.h;
  std::vector<double> tpsi(n);
  for (int i = 0; i < n; ++i) tpsi[i] = geom.grid.node(i) * psi[i];
  double acc = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double rho = geom.grid.node(i);
    const double ar = std::abs(rho);
    if (ar < r_cutoff) continue;
    const double v = std::sqrt(closed::g_upper_rr(rho));
    const double sgn = rho < 0.0 ? -1.0 : 1.0;
    const double lt = rho * dpsi_dt[i] + sgn * v * centered(tpsi, i, h, n);
    acc += std::pow(ar, p) * lt * lt * h;
  }
  return acc;
}

double rp_bulk_sector(const GeometryBundle& geom, int ell, const std::vector<double>& psi,
                      const std::vector<double>& dpsi_dt, double p, double r_cutoff) {
  const int n = geom.grid.n_points;
  const double h = geom.grid.h;
  const double ll1 = ell * (ell + 1);
  std::vector<double> tpsi(n);
  for (int i = 0; i < n; ++i) tpsi[i] = geom.grid.node(i) * psi[i];
  double acc = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double rho = geom.grid.node(i);
    const double ar = std::abs(rho);
    if (ar < r_cutoff) continue;
    const double v = std::sqrt(closed::g_upper_rr(rho));
    const double sgn = rho < 0.0 ? -1.0 : 1.0;
    const double lt = rho * dpsi_dt[i] + sgn * v * centered(tpsi, i, h, n);
    const double angular = (ll1 + 1.0) * tpsi[i] * tpsi[i] / (ar * ar);
    acc += std::pow(ar, p - 1.0) * (lt * lt + (2.0 - p) * angular) * h;
  }
  return acc;
}

DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& values,
                   double t_lo, double t_hi) {
  std::vector<double> x, y;
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    if (!(std::abs(values[i]) > 0.0))
      throw std::invalid_argument("decay_fit: non-positive samples in the window");
    x.push_back(std::log(times[i]));
    y.push_back(std::log(std::abs(values[i])));
  }
  const int m = static_cast<int>(x.size());
  if (m < 3) throw std::invalid_argument("decay_fit: too few samples in the window");
  double xm = 0.0, ym = 0.0;
  for (int i = 0; i < m; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= m;
  ym /= m;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  DecayFit fit;
  fit.exponent = sxy / sxx;
  double ss = 0.0;
  for (int i = 0; i < m; ++i) {
    const double r = y[i] - ym - fit.exponent * (x[i] - xm);
    ss += r * r;
  }
  fit.stderr_exponent = m > 2 ? std::sqrt(ss / (m - 2) / sxx) : 0.0;
  fit.n_samples = m;
  return fit;
}

}  // namespace catenoid
