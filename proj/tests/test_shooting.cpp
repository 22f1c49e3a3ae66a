#include <doctest.h>

#include <cmath>
#include <random>

#include "catenoid/geometry.hpp"
#include "catenoid/modulation.hpp"
#include "catenoid/operators.hpp"
#include "catenoid/shooting.hpp"

using namespace catenoid;

namespace {

struct Fixture {
  GeometryBundle geom = make_geometry(RadialGrid(50.0, 2001));
  SpectrumReport spec = sector_spectrum(assemble(0, geom), geom);
  ZVectors zv = make_zvectors(geom, spec, 8.0);
  double dt = 0.4 * geom.grid.h / std::sqrt(2.0);
  DirectionClassification cls = classify_directions(geom, spec, zv, dt);
};

Fixture& fix() {
  static Fixture f;
  return f;
}

std::vector<double> bumps(const RadialGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), pos(-6.0, 6.0), wid(0.8, 2.0);
  std::vector<double> f(g.n_points, 0.0);
  for (int b = 0; b < 2; ++b) {
    const double a = amp(rng), c = pos(rng), w = wid(rng);
    for (int i = 0; i < g.n_points; ++i) f[i] += a * std::exp(-std::pow((g.node(i) - c) / w, 2));
  }
  f.front() = f.back() = 0.0;
  return f;
}

}  // namespace

TEST_CASE("classifier labels the two eigen-directions by measured rate") {
  auto& F = fix();
  const double mu = std::sqrt(*F.spec.mu2);
  CHECK(F.cls.rate_growing == doctest::Approx(mu).epsilon(0.01));
  CHECK(F.cls.rate_decaying == doctest::Approx(-mu).epsilon(0.01));
  // at zero boost the momentum convention puts growth on the minus-momentum
  // pair; the classifier discovers this rather than assuming it
  CHECK(F.cls.growing_is_zplus);
}

TEST_CASE("closed-form parameter: pure-direction and cancellation cases") {
  auto& F = fix();
  const int n = F.geom.grid.n_points;
  std::vector<double> zero(n, 0.0);

  // zero base data: nothing to cancel
  DataFamily f0 = make_family(F.geom, F.spec, F.zv, F.cls, zero, zero);
  AnalyticB0 a0 = analytic_b0(F.geom, F.spec, F.cls, f0);
  CHECK(!a0.degenerate);
  CHECK(a0.b0 == doctest::Approx(0.0).epsilon(1e-12));

  // base = family direction: exact cancellation at -1
  DataFamily f1 = make_family(F.geom, F.spec, F.zv, F.cls, f0.dir_psi, f0.dir_v);
  AnalyticB0 a1 = analytic_b0(F.geom, F.spec, F.cls, f1);
  CHECK(a1.b0 == doctest::Approx(-1.0).epsilon(1e-12));

  // a family along the decaying direction cannot steer the growing mode
  DataFamily f2 = f0;
  const double mu = std::sqrt(*F.spec.mu2);
  for (int i = 0; i < n; ++i) {
    f2.dir_psi[i] = F.spec.phi_mu[i];
    f2.dir_v[i] = (F.cls.growing_is_zplus ? -1.0 : 1.0) * mu * F.spec.phi_mu[i];
  }
  AnalyticB0 a2 = analytic_b0(F.geom, F.spec, F.cls, f2);
  CHECK(a2.degenerate);
}

TEST_CASE("bisection agrees with the closed form") {
  auto& F = fix();
  DataFamily fam =
      make_family(F.geom, F.spec, F.zv, F.cls, bumps(F.geom.grid, 41), bumps(F.geom.grid, 42));
  AnalyticB0 an = analytic_b0(F.geom, F.spec, F.cls, fam);
  REQUIRE(!an.degenerate);

  ShootConfig cfg;
  cfg.t_final = 30.0;
  cfg.dt_safety = 0.4;
  cfg.bracket_lo = an.b0 - 0.5;
  cfg.bracket_hi = an.b0 + 0.5;
  cfg.tol = 1e-7;
  ShootingOutcome out = shoot(F.geom, F.spec, F.zv, F.cls, fam, cfg);
  // on generic data the separatrix of the discrete step map sits O(dt^2)
  // from the continuum projection; the headline tolerance is 1e-4 relative
  CHECK(std::abs(out.b0_star - an.b0) < 1e-4 * std::max(1.0, std::abs(an.b0)));
  CHECK(out.iterations > 15);

  // base data equal to the family direction: cancellation at -1 is exact for
  // the discrete map too, so the match tightens to the bracket resolution
  DataFamily pure = make_family(F.geom, F.spec, F.zv, F.cls, fam.dir_psi, fam.dir_v);
  AnalyticB0 an_pure = analytic_b0(F.geom, F.spec, F.cls, pure);
  CHECK(an_pure.b0 == doctest::Approx(-1.0).epsilon(1e-12));
  ShootConfig cfg_pure = cfg;
  cfg_pure.bracket_lo = -2.0;
  cfg_pure.bracket_hi = 0.0;
  ShootingOutcome out_pure = shoot(F.geom, F.spec, F.zv, F.cls, pure, cfg_pure);
  CHECK(std::abs(out_pure.b0_star - an_pure.b0) < 1e-6);

  // identical call, identical answer
  ShootingOutcome out2 = shoot(F.geom, F.spec, F.zv, F.cls, fam, cfg);
  CHECK(out.b0_star == out2.b0_star);
  CHECK(out.iterations == out2.iterations);
}

TEST_CASE("data already orthogonal to the growing mode needs no correction") {
  auto& F = fix();
  const int n = F.geom.grid.n_points;
  // remove the growing component from a random bump analytically
  std::vector<double> base_psi = bumps(F.geom.grid, 7), base_v(n, 0.0);
  DataFamily pre = make_family(F.geom, F.spec, F.zv, F.cls, base_psi, base_v);
  AnalyticB0 a = analytic_b0(F.geom, F.spec, F.cls, pre);
  for (int i = 0; i < n; ++i) {
    base_psi[i] += a.b0 * pre.dir_psi[i];
    base_v[i] += a.b0 * pre.dir_v[i];
  }
  DataFamily fam = make_family(F.geom, F.spec, F.zv, F.cls, base_psi, base_v);
  ShootConfig cfg;
  cfg.t_final = 30.0;
  cfg.dt_safety = 0.4;
  cfg.bracket_lo = -0.25;
  cfg.bracket_hi = 0.25;
  cfg.tol = 1e-7;
  ShootingOutcome out = shoot(F.geom, F.spec, F.zv, F.cls, fam, cfg);
  CHECK(std::abs(out.b0_star) < 1e-5);
}

TEST_CASE("exit time increases toward the manifold; envelope is the exit witness") {
  auto& F = fix();
  DataFamily fam =
      make_family(F.geom, F.spec, F.zv, F.cls, bumps(F.geom.grid, 17), bumps(F.geom.grid, 18));
  AnalyticB0 an = analytic_b0(F.geom, F.spec, F.cls, fam);
  ShootConfig cfg;
  cfg.t_final = 30.0;
  cfg.dt_safety = 0.4;
  cfg.bracket_lo = an.b0 - 0.5;
  cfg.bracket_hi = an.b0 + 0.5;
  cfg.tol = 1e-4;
  ShootingOutcome out = shoot(F.geom, F.spec, F.zv, F.cls, fam, cfg);

  double prev = 0.0;
  for (double db : {1e-1, 1e-2, 1e-3, 1e-4}) {
    Trial t = run_trial(F.geom, F.spec, F.zv, fam, out.b0_star + db, cfg, out.lambda0, false);
    CHECK(t.exit_side != 0);
    CHECK(t.tau_exit > prev);
    prev = t.tau_exit;
  }
  // opposite sides of the manifold exit through opposite envelope rails
  Trial above = run_trial(F.geom, F.spec, F.zv, fam, out.b0_star + 1e-2, cfg, out.lambda0, false);
  Trial below = run_trial(F.geom, F.spec, F.zv, fam, out.b0_star - 1e-2, cfg, out.lambda0, false);
  CHECK(above.exit_side == -below.exit_side);
}
