#ifndef CATENOID_SPECTRAL_HPP
#define CATENOID_SPECTRAL_HPP

#include <vector>

namespace catenoid {

// Symmetric tridiagonal eigen-utilities (diag d[0..n-1], off-diag e[0..n-2])
// built on Sturm-sequence counts; no external linear algebra.

// number of eigenvalues strictly below x
int sturm_count_below(const std::vector<double>& d, const std::vector<double>& e, double x);

// k-th eigenvalue in ascending order (k in [0, n-1]) by bisection
double eigenvalue_by_index(const std::vector<double>& d, const std::vector<double>& e, int k,
                           double tol_rel = 1e-14);

// largest m eigenvalues, ascending
std::vector<double> top_eigenvalues(const std::vector<double>& d, const std::vector<double>& e,
                                    int m);

// eigenvector for an isolated eigenvalue via shifted inverse iteration
std::vector<double> inverse_iteration(const std::vector<double>& d, const std::vector<double>& e,
                                      double lambda, int iters = 4);

// number of eigenvalues of the tridiagonal matrix, restricted to the
// orthogonal complement of v, that exceed tau (bordered inertia count)
int count_above_on_complement(const std::vector<double>& d, const std::vector<double>& e,
                              const std::vector<double>& v, double tau);

// Symmetric banded matrix, lower storage: band[k][i] = A(i+k, i), k = 0..bw.
struct SymmetricBanded {
  int n = 0;
  int bw = 0;
  std::vector<std::vector<double>> band;

  SymmetricBanded() = default;
  SymmetricBanded(int n_, int bw_);
  double& at(int i, int j);           // requires |i-j| <= bw
  double get(int i, int j) const;     // 0 outside the band
  std::vector<double> apply(const std::vector<double>& x) const;
};

// inertia count: number of eigenvalues of A strictly above tau
int banded_count_above(const SymmetricBanded& A, double tau);

// k-th eigenvalue (ascending) of a banded matrix by inertia bisection
double banded_eigenvalue_by_index(const SymmetricBanded& A, int k, double tol_rel = 1e-12);

}  // namespace catenoid

#endif
