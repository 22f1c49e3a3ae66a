#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "catenoid/geometry.hpp"
#include "catenoid/operators.hpp"
#include "catenoid/spectral.hpp"

using namespace catenoid;

namespace {

GeometryBundle small_geom() {
  static GeometryBundle g = make_geometry(RadialGrid(40.0, 1601));
  return g;
}

std::vector<double> bump(const RadialGrid& g, double c, double w) {
  std::vector<double> f(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    const double s = (g.node(i) - c) / w;
    f[i] = std::exp(-s * s);
  }
  f.front() = f.back() = 0.0;
  return f;
}

}  // namespace

TEST_CASE("tridiagonal utilities against the discrete Laplacian") {
  // diag 2, off -1: eigenvalues 2 - 2 cos(k pi / (n+1))
  const int n = 40;
  std::vector<double> d(n, 2.0), e(n - 1, -1.0);
  for (int k : {1, 7, n}) {
    const double expected = 2.0 - 2.0 * std::cos(k * M_PI / (n + 1));
    CHECK(eigenvalue_by_index(d, e, k - 1) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(sturm_count_below(d, e, 2.0) == n / 2);

  // banded route sees the same spectrum
  SymmetricBanded A(n, 2);
  for (int i = 0; i < n; ++i) A.at(i, i) = 2.0;
  for (int i = 0; i + 1 < n; ++i) A.at(i, i + 1) = -1.0;
  CHECK(banded_eigenvalue_by_index(A, n - 1) ==
        doctest::Approx(eigenvalue_by_index(d, e, n - 1)).epsilon(1e-9));
  CHECK(banded_count_above(A, 2.0) == n / 2);
}

TEST_CASE("constrained eigenvalue count via the bordered inertia") {
  // A = diag(3, 1, -1), constraint v = e1: spectrum on v-perp is {1, -1}
  std::vector<double> d{3.0, 1.0, -1.0}, e{0.0, 0.0};
  std::vector<double> v{1.0, 0.0, 0.0};
  CHECK(count_above_on_complement(d, e, v, 0.0) == 1);
  CHECK(count_above_on_complement(d, e, v, 2.0) == 0);
  std::vector<double> v2{0.0, 1.0, 0.0};
  CHECK(count_above_on_complement(d, e, v2, 0.0) == 1);
  CHECK(count_above_on_complement(d, e, v2, 2.5) == 1);
}

TEST_CASE("sector operator: constants, symmetry, kernel order") {
  GeometryBundle geom = small_geom();
  SectorOperator h0 = assemble(0, geom);

  // applied to a constant the divergence part drops, leaving the potential
  std::vector<double> ones(geom.grid.n_points, 1.0);
  std::vector<double> r = h0.apply(ones);
  for (int i = 1; i + 1 < geom.grid.n_points; i += 37)
    CHECK(r[i] == doctest::Approx(geom.pot.values[i]).epsilon(1e-11));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> u(geom.grid.n_points), v(geom.grid.n_points);
  for (int i = 0; i < geom.grid.n_points; ++i) {
    u[i] = uni(rng);
    v[i] = uni(rng);
  }
  u.front() = u.back() = v.front() = v.back() = 0.0;
  const double defect = std::abs(h0.inner_w(h0.apply(u), v) - h0.inner_w(u, h0.apply(v)));
  CHECK(defect < 1e-12 * std::abs(h0.inner_w(u, u)));

  // interior kernel residual shrinks at second order
  SectorOperator h1 = assemble(1, geom);
  GeometryBundle fine = make_geometry(RadialGrid(40.0, 3201));
  SectorOperator h1f = assemble(1, fine);
  const double r_coarse = h1.norm_w_interior(h1.apply(geom.modes.nu0));
  const double r_fine = h1f.norm_w_interior(h1f.apply(fine.modes.nu0));
  CHECK(std::log2(r_coarse / r_fine) > 1.9);
}

TEST_CASE("spectra: one unstable mode, clean complements, stable mu^2") {
  GeometryBundle geom = small_geom();
  SpectrumReport s0 = sector_spectrum(assemble(0, geom), geom);
  REQUIRE(s0.mu2.has_value());
  CHECK(s0.positive_count == 1);
  CHECK(*s0.mu2 > 1.0);
  CHECK(*s0.mu2 < 2.0);
  CHECK(std::abs(*s0.mu2 - *s0.mu2_shooting) / *s0.mu2 < 1e-6);

  // a-posteriori Dirichlet justification: e^(-mu rho_max) is negligible
  CHECK(std::exp(-std::sqrt(*s0.mu2) * geom.grid.rho_max) < 1e-8);

  // eigenfunction: even, positive, eventually monotone
  const int c = geom.grid.center();
  CHECK(s0.phi_mu[c] > 0.0);
  for (int k = 1; k < 200; k += 13)
    CHECK(s0.phi_mu[c + k] == doctest::Approx(s0.phi_mu[c - k]).epsilon(1e-7));
  for (int i = c + 40; i + 40 < geom.grid.n_points; i += 10)
    CHECK(s0.phi_mu[i + 1] <= s0.phi_mu[i] + 1e-14);

  for (int ell : {1, 2, 3}) {
    SpectrumReport s = sector_spectrum(assemble(ell, geom), geom);
    CHECK(s.positive_count == 0);
  }

  // domain doubling moves mu^2 by less than 1e-4 relative
  GeometryBundle wide = make_geometry(RadialGrid(80.0, 3201));
  SpectrumReport s0w = sector_spectrum(assemble(0, wide), wide);
  CHECK(std::abs(*s0w.mu2 - *s0.mu2) / *s0.mu2 < 1e-4);

  // the ell=1 kernel shadow is a discretization artifact of the truncated
  // kernel mode; it shrinks at second order in h
  SpectrumReport s1 = sector_spectrum(assemble(1, geom), geom);
  GeometryBundle fine2 = make_geometry(RadialGrid(40.0, 3201));
  SpectrumReport s1f = sector_spectrum(assemble(1, fine2), fine2);
  REQUIRE(s1.kernel_shadow.has_value());
  REQUIRE(s1f.kernel_shadow.has_value());
  CHECK(*s1f.kernel_shadow < 0.4 * *s1.kernel_shadow);
}

TEST_CASE("weighted norms: basics and the nu0 shell profile") {
  GeometryBundle geom = small_geom();
  std::vector<double> zero(geom.grid.n_points, 0.0);
  CHECK(weighted_norm(zero, 0, geom, 2.0, 1, 0.5).value == 0.0);
  CHECK_THROWS(weighted_norm(zero, 0, geom, 2.0, 3, 0.5));  // stencil order bound

  // field in a single shell: one term in the sum, bounded by the shell data
  std::vector<double> shell = bump(geom.grid, 6.0, 0.5);
  WeightedNorm wn = weighted_norm(shell, 0, geom, 2.0, 0, 1.0);
  CHECK(wn.value > 0.0);
  // k = 2 shell (4..8): value <= 2^(k gamma) sqrt(shell volume) * max|f|
  double vol = 0.0;
  for (int i = 0; i < geom.grid.n_points; ++i)
    if (std::abs(geom.grid.node(i)) >= 4.0 && std::abs(geom.grid.node(i)) <= 8.0)
      vol += geom.metric.weight[i] * geom.grid.h;
  CHECK(wn.value <= 4.0 * std::sqrt(vol) * 1.0 * 1.05);

  // triangle inequality on random pairs
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> a(geom.grid.n_points), b(geom.grid.n_points), ab(geom.grid.n_points);
    for (int i = 0; i < geom.grid.n_points; ++i) {
      a[i] = uni(rng);
      b[i] = uni(rng);
      ab[i] = a[i] + b[i];
    }
    const double na = weighted_norm(a, 1, geom, 2.0, 1, -0.5).value;
    const double nb = weighted_norm(b, 1, geom, 2.0, 1, -0.5).value;
    const double nab = weighted_norm(ab, 1, geom, 2.0, 1, -0.5).value;
    CHECK(nab <= na + nb + 1e-10);
  }

  // nu0 with gamma = -3/2: the sup-shell sequence decreases dyadically
  std::vector<double> profile = shell_profile(geom.modes.nu0, geom, -1.5);
  for (size_t k = 0; k + 1 < profile.size() - 1; ++k) CHECK(profile[k + 1] < profile[k]);
}

TEST_CASE("coercivity probe: eigenmode, kernel mode, bump") {
  GeometryBundle geom = small_geom();
  SpectrumReport s0 = sector_spectrum(assemble(0, geom), geom);

  CoercivityProbe p_mu = coercivity_probe(s0.phi_mu, 0, geom, s0, 8.0);
  // <-H phi, phi> = -mu^2 ||phi||^2 < 0; the Z_mu pairing carries the bound
  CHECK(p_mu.quad_form == doctest::Approx(-*s0.mu2).epsilon(1e-6));
  CHECK(p_mu.pairing_mu > 0.5);
  CHECK(p_mu.ratio > 0.0);
  CHECK(std::isfinite(p_mu.ratio));

  CoercivityProbe p_nu = coercivity_probe(geom.modes.nu0, 1, geom, s0, 8.0);
  CHECK(std::abs(p_nu.quad_form) < 1e-3);  // kernel direction
  CHECK(p_nu.pairing_kernel > 0.0);
  CHECK(std::isfinite(p_nu.ratio));
  CHECK(p_nu.ratio > 0.0);

  std::vector<double> b = bump(geom.grid, 0.0, 0.8);
  CoercivityProbe p_b = coercivity_probe(b, 0, geom, s0, 8.0);
  CHECK(std::isfinite(p_b.ratio));
  CHECK(std::isfinite(p_b.sobolev_ratio));
  GeometryBundle fine = make_geometry(RadialGrid(40.0, 3201));
  SpectrumReport s0f = sector_spectrum(assemble(0, fine), fine);
  std::vector<double> bf(fine.grid.n_points);
  for (int i = 0; i < fine.grid.n_points; ++i) {
    const double s = fine.grid.node(i) / 0.8;
    bf[i] = std::exp(-s * s);
  }
  CoercivityProbe p_bf = coercivity_probe(bf, 0, fine, s0f, 8.0);
  CHECK(p_bf.ratio == doctest::Approx(p_b.ratio).epsilon(0.05));

  // measured constants against the cutoff radius, recorded for the report
  for (double rc : {8.0, 16.0, 32.0}) {
    CoercivityProbe p = coercivity_probe(b, 0, geom, s0, rc);
    CHECK(std::isfinite(p.ratio));
    MESSAGE("R_ctf=", rc, " coercivity ratio=", p.ratio, " sobolev ratio=", p.sobolev_ratio);
  }
}
