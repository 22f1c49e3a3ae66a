#include "catenoid/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace catenoid {

namespace {

// Gershgorin bounds
void bounds(const std::vector<double>& d, const std::vector<double>& e, double& lo, double& hi) {
  const int n = static_cast<int>(d.size());
  lo = std::numeric_limits<double>::max();
  hi = std::numeric_limits<double>::lowest();
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < n) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
}

// pivoted tridiagonal solve of (T - shift I) x = b; returns false on breakdown
bool shifted_solve(const std::vector<double>& d, const std::vector<double>& e, double shift,
                   std::vector<double> b, std::vector<double>& x) {
  const int n = static_cast<int>(d.size());
  std::vector<double> dl(n, 0.0), dd(n), du(n, 0.0), du2(n, 0.0);
  for (int i = 0; i < n; ++i) dd[i] = d[i] - shift;
  for (int i = 0; i + 1 < n; ++i) {
    dl[i] = e[i];
    du[i] = e[i];
  }
  // LU with partial pivoting (row swaps between i and i+1)
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(dd[i]) >= std::abs(dl[i])) {
      if (dd[i] == 0.0) return false;
      const double m = dl[i] / dd[i];
      dd[i + 1] -= m * du[i];
      b[i + 1] -= m * b[i];
      dl[i] = 0.0;
    } else {
      const double m = dd[i] / dl[i];
      std::swap(dd[i], dl[i]);
      const double du_i = du[i];
      du[i] = dd[i + 1];
      dd[i + 1] = du_i - m * dd[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -m * du[i + 1];
      }
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= m * b[i];
      dl[i] = 0.0;
    }
  }
  if (dd[n - 1] == 0.0) return false;
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    if (i + 1 < n) s -= du[i] * x[i + 1];
    if (i + 2 < n) s -= du2[i] * x[i + 2];
    x[i] = s / dd[i];
  }
  return true;
}

}  // namespace

int sturm_count_below(const std::vector<double>& d, const std::vector<double>& e, double x) {
  const int n = static_cast<int>(d.size());
  int count = 0;
  double q = 1.0;
  const double tiny = 1e-300;
  for (int i = 0; i < n; ++i) {
    if (i == 0)
      q = d[0] - x;
    else
      q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double eigenvalue_by_index(const std::vector<double>& d, const std::vector<double>& e, int k,
                           double tol_rel) {
  double lo, hi;
  bounds(d, e, lo, hi);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count_below(d, e, mid) <= k)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= tol_rel * scale) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> top_eigenvalues(const std::vector<double>& d, const std::vector<double>& e,
                                    int m) {
  const int n = static_cast<int>(d.size());
  m = std::min(m, n);
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) out[j] = eigenvalue_by_index(d, e, n - m + j);
  return out;
}

std::vector<double> inverse_iteration(const std::vector<double>& d, const std::vector<double>& e,
                                      double lambda, int iters) {
  const int n = static_cast<int>(d.size());
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n), y;
  for (auto& v : x) v = u(rng);
  // small off-eigenvalue shift keeps the solve well posed
  const double eps = 1e-11 * std::max(1.0, std::abs(lambda));
  for (int it = 0; it < iters; ++it) {
    if (!shifted_solve(d, e, lambda + eps, x, y)) {
      if (!shifted_solve(d, e, lambda + 17.0 * eps, x, y))
        throw std::runtime_error("inverse_iteration: singular shifted solve");
    }
    double nrm = 0.0;
    for (double v : y) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (int i = 0; i < n; ++i) x[i] = y[i] / nrm;
  }
  return x;
}

int count_above_on_complement(const std::vector<double>& d, const std::vector<double>& e,
                              const std::vector<double>& v, double tau) {
  // inertia of the bordered matrix [[A - tau, v], [v^T, 0]]: the number of
  // positive eigenvalues of A - tau restricted to v-perp is n_+(bordered) - 1
  const int n = static_cast<int>(d.size());
  const int below = sturm_count_below(d, e, tau);
  const int npos_full = n - below;  // assumes tau avoids exact eigenvalues
  std::vector<double> x;
  if (!shifted_solve(d, e, tau, v, x))
    throw std::runtime_error("count_above_on_complement: shift hits an eigenvalue");
  double s = 0.0;
  for (int i = 0; i < n; ++i) s -= v[i] * x[i];
  return npos_full + (s > 0.0 ? 1 : 0) - 1;
}

SymmetricBanded::SymmetricBanded(int n_, int bw_) : n(n_), bw(bw_) {
  band.assign(bw + 1, std::vector<double>(n, 0.0));
}

double& SymmetricBanded::at(int i, int j) {
  if (j > i) std::swap(i, j);
  return band[i - j][j];
}

double SymmetricBanded::get(int i, int j) const {
  if (j > i) std::swap(i, j);
  if (i - j > bw) return 0.0;
  return band[i - j][j];
}

std::vector<double> SymmetricBanded::apply(const std::vector<double>& x) const {
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = band[0][i] * x[i];
    for (int k = 1; k <= bw; ++k) {
      if (i - k >= 0) s += band[k][i - k] * x[i - k];
      if (i + k < n) s += band[k][i] * x[i + k];
    }
    y[i] = s;
  }
  return y;
}

int banded_count_above(const SymmetricBanded& A, double tau) {
  // LDL^T without pivoting; nudge the shift if a pivot collapses
  const int n = A.n, bw = A.bw;
  double shift = tau;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<std::vector<double>> L(bw, std::vector<double>(n, 0.0));
    std::vector<double> D(n, 0.0);
    bool ok = true;
    int pos = 0;
    for (int j = 0; j < n && ok; ++j) {
      double dj = A.get(j, j) - shift;
      for (int k = 1; k <= bw && j - k >= 0; ++k)
        dj -= L[k - 1][j - k] * L[k - 1][j - k] * D[j - k];
      if (dj == 0.0) {
        ok = false;
        break;
      }
      D[j] = dj;
      if (dj > 0.0) ++pos;
      for (int i = j + 1; i < std::min(n, j + bw + 1); ++i) {
        double s = A.get(i, j);
        for (int k = 1; k <= bw; ++k) {
          const int m = j - k;
          if (m >= 0 && i - m <= bw) s -= L[i - m - 1][m] * L[k - 1][m] * D[m];
        }
        L[i - j - 1][j] = s / dj;
      }
    }
    if (ok) return pos;
    shift = tau * (1.0 + 1e-12 * (attempt + 1)) + 1e-300;
  }
  throw std::runtime_error("banded_count_above: persistent factorization breakdown");
}

double banded_eigenvalue_by_index(const SymmetricBanded& A, int k, double tol_rel) {
  double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
  for (int i = 0; i < A.n; ++i) {
    double r = 0.0;
    for (int m = 1; m <= A.bw; ++m) {
      if (i - m >= 0) r += std::abs(A.get(i, i - m));
      if (i + m < A.n) r += std::abs(A.get(i, i + m));
    }
    lo = std::min(lo, A.get(i, i) - r);
    hi = std::max(hi, A.get(i, i) + r);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int above = banded_count_above(A, mid);
    // eigenvalues above mid: if more than n-1-k, the k-th (ascending) is above mid
    if (above > A.n - 1 - k)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= tol_rel * scale) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace catenoid
