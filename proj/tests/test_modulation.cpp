#include <doctest.h>

#include <cmath>
#include <random>

#include "catenoid/evolution.hpp"
#include "catenoid/geometry.hpp"
#include "catenoid/quadrature.hpp"
#include "catenoid/modulation.hpp"
#include "catenoid/operators.hpp"

using namespace catenoid;

namespace {

struct Fixture {
  GeometryBundle geom = make_geometry(RadialGrid(60.0, 2401));
  SpectrumReport spec = sector_spectrum(assemble(0, geom), geom);
  ZVectors zv = make_zvectors(geom, spec, 8.0);
};

Fixture& fix() {
  static Fixture f;
  return f;
}

std::vector<double> noise(const RadialGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> f(g.n_points);
  for (auto& x : f) x = uni(rng);
  return f;
}

}  // namespace

TEST_CASE("pairing: antisymmetric, bilinear, sector-checked") {
  auto& F = fix();
  FirstOrderVector u{0, noise(F.geom.grid, 1), noise(F.geom.grid, 2)};
  FirstOrderVector v{0, noise(F.geom.grid, 3), noise(F.geom.grid, 4)};
  FirstOrderVector w{1, noise(F.geom.grid, 5), noise(F.geom.grid, 6)};
  CHECK(pair(F.geom.grid, u, u) == 0.0);
  CHECK(pair(F.geom.grid, u, v) == doctest::Approx(-pair(F.geom.grid, v, u)).epsilon(1e-14));
  CHECK_THROWS(pair(F.geom.grid, u, w));

  FirstOrderVector u2 = u;
  for (auto& x : u2.psi) x *= 2.0;
  for (auto& x : u2.psidot) x *= 2.0;
  CHECK(pair(F.geom.grid, u2, v) == doctest::Approx(2.0 * pair(F.geom.grid, u, v)).epsilon(1e-13));
}

TEST_CASE("truncated eigenvectors: support, normalization, projections") {
  auto& F = fix();
  for (int i = 0; i < F.geom.grid.n_points; ++i) {
    if (std::abs(F.geom.grid.node(i)) > 2.0 * F.zv.r_ctf) {
      CHECK(F.zv.z_plus.psi[i] == 0.0);
      CHECK(F.zv.z_kernel.psi[i] == 0.0);
    }
  }
  CHECK(pair(F.geom.grid, F.zv.z_plus, F.zv.z_minus) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(pair(F.geom.grid, F.zv.z_plus, F.zv.z_plus) == 0.0);

  auto [ap, am] = project_unstable(F.geom, F.zv, F.zv.z_plus);
  CHECK(ap == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(am == doctest::Approx(0.0).epsilon(1e-12));
  auto [bp, bm] = project_unstable(F.geom, F.zv, F.zv.z_minus);
  CHECK(bp == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decomposition against Z_+- is unique: residual reprojects to zero") {
  auto& F = fix();
  const int n = F.geom.grid.n_points;
  FirstOrderVector state{0, noise(F.geom.grid, 11), noise(F.geom.grid, 12)};
  auto [ap, am] = project_unstable(F.geom, F.zv, state);
  FirstOrderVector resid = state;
  for (int i = 0; i < n; ++i) {
    resid.psi[i] -= ap * F.zv.z_plus.psi[i] + am * F.zv.z_minus.psi[i];
    resid.psidot[i] -= ap * F.zv.z_plus.psidot[i] + am * F.zv.z_minus.psidot[i];
  }
  auto [rp, rm] = project_unstable(F.geom, F.zv, resid);
  const double scale = std::abs(ap) + std::abs(am);
  CHECK(std::abs(rp) < 1e-12 * scale);
  CHECK(std::abs(rm) < 1e-12 * scale);
}

TEST_CASE("kernel pair projection annihilates its two directions") {
  auto& F = fix();
  const int n = F.geom.grid.n_points;
  // state = 3 phi_1 - 2 phi_4, with phi_1 = (nu0, 0), phi_4 = (0, -w nu0)
  FirstOrderVector st{1, std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    st.psi[i] = 3.0 * F.geom.modes.nu0[i];
    st.psidot[i] = 2.0 * F.geom.metric.weight[i] * F.geom.modes.nu0[i];
  }
  auto [c1, c4] = project_kernel(F.geom, F.zv, st);
  CHECK(c1 == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(c4 == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("two-route evaluation of the cross pairing") {
  auto& F = fix();
  const double via_pairing = pair(F.geom.grid, F.zv.z_kernel, F.zv.z_gkernel);
  double direct = 0.0;
  {
    const int n = F.geom.grid.n_points;
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i)
      f[i] = -F.zv.chi[i] * F.zv.chi[i] * F.geom.modes.nu0[i] * F.geom.modes.nu0[i] *
             F.geom.metric.weight[i];
    direct = 0.5 * (f.front() + f.back());
    for (int i = 1; i + 1 < n; ++i) direct += f[i];
    direct *= F.geom.grid.h;
  }
  CHECK(via_pairing == doctest::Approx(direct).epsilon(1e-12));
  CHECK(via_pairing < 0.0);
}

TEST_CASE("d-matrix: diagonal, equal entries, monotone, oracle-consistent") {
  CHECK_THROWS(d_matrix(2.0));
  const double limit = kernel_mass_limit();
  // nu0^2 w = dZ/drho pointwise, so the full kernel mass is exactly the
  // plane separation of both ends: two independent quadratures, one number
  CHECK(limit == doctest::Approx(2.0 * plane_separation()).epsilon(1e-10));
  double prev_mass = 0.0;
  for (double rc : {8.0, 16.0, 32.0}) {
    DMatrix m = d_matrix(rc);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) {
          CHECK(m.d[i][j] == m.d[0][0]);
          CHECK(m.d[i][j] < 0.0);
        } else {
          CHECK(m.d[i][j] == 0.0);
        }
      }
    CHECK(m.determinant == doctest::Approx(std::pow(m.d[0][0], 3.0)));
    const double mass = -m.d[0][0];
    CHECK(mass > prev_mass);
    prev_mass = mass;
    CHECK(mass + kernel_mass_tail(rc) == doctest::Approx(limit).epsilon(1e-9));
  }
}

TEST_CASE("generalized kernel: exact chain, confined commutator, cutoff scaling") {
  auto& F = fix();
  KernelResiduals kr = generalized_kernel_residuals(F.geom, F.zv);
  CHECK(kr.m_phi1 < 0.01);                   // O(h^2) floor
  CHECK(kr.m_phi4_minus_phi1 < 1e-13);       // exact at zero boost
  CHECK(kr.residual_confined);

  // refinement order of the untruncated residual
  GeometryBundle fine = make_geometry(RadialGrid(60.0, 4801));
  SpectrumReport spec_f = sector_spectrum(assemble(0, fine), fine);
  ZVectors zv_f = make_zvectors(fine, spec_f, 8.0);
  KernelResiduals kr_f = generalized_kernel_residuals(fine, zv_f);
  CHECK(std::log2(kr.m_phi1 / kr_f.m_phi1) > 1.8);

  // cutoff-error norm shrinks with the cutoff radius
  std::vector<double> rcs{8.0, 16.0, 32.0}, les;
  for (double rc : rcs) {
    ZVectors z = make_zvectors(F.geom, F.spec, rc);
    les.push_back(generalized_kernel_residuals(F.geom, z).truncated_residual_le_star);
  }
  CHECK(les[1] < les[0]);
  CHECK(les[2] < les[1]);
  const double fitted = std::log2(les[2] / les[0]) / std::log2(rcs[2] / rcs[0]);
  CHECK(fitted < 0.0);
  MESSAGE("cutoff residual LE* exponent in R_ctf: ", fitted);
}

TEST_CASE("pairing derivative matches the generator along the flow") {
  auto& F = fix();
  SectorOperator h1 = assemble(1, F.geom);
  const double dt = 0.01;
  Leapfrog<double> lf(catenoid_background<double>(F.geom, 1), dt, 0.5);
  std::vector<double> z(F.geom.grid.n_points, 0.0), p0(F.geom.grid.n_points);
  for (int i = 0; i < F.geom.grid.n_points; ++i) {
    const double s = (F.geom.grid.node(i) - 3.0) / 1.5;
    p0[i] = std::exp(-s * s);
  }
  p0.front() = p0.back() = 0.0;
  lf.set_data(p0, z, 0.0);
  for (int s = 0; s < 100; ++s) lf.step();  // past the startup transient
  std::vector<double> omegas;
  double omega_m_mid = 0.0;
  for (int s = 0; s < 3; ++s) {
    lf.step(nullptr, [&](double, const std::vector<double>& psi, const std::vector<double>& vel) {
      FirstOrderVector fo = make_first_order(F.geom, 1, psi, vel);
      omegas.push_back(pair(F.geom.grid, fo, F.zv.z_kernel));
      if (s == 1) {
        FirstOrderVector mfo = apply_m(F.geom, h1, fo);
        omega_m_mid = pair(F.geom.grid, mfo, F.zv.z_kernel);
      }
    });
  }
  const double fd = (omegas[2] - omegas[0]) / (2.0 * dt);
  CHECK(fd == doctest::Approx(omega_m_mid).epsilon(1e-2));

  // and the generator moves to the other slot with a sign flip; exact for
  // compactly supported fields by summation by parts
  FirstOrderVector probe{1, p0, z};
  FirstOrderVector mp = apply_m(F.geom, h1, probe);
  FirstOrderVector mz = apply_m(F.geom, h1, F.zv.z_kernel);
  const double lhs = pair(F.geom.grid, mp, F.zv.z_kernel);
  const double rhs = -pair(F.geom.grid, probe, mz);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
}
