#include <doctest.h>

#include <cmath>

#include "catenoid/geometry.hpp"
#include "catenoid/operators.hpp"
#include "catenoid/quadrature.hpp"

using namespace catenoid;

TEST_CASE("grid validates its construction") {
  CHECK_THROWS(RadialGrid(10.0, 100));  // even
  CHECK_THROWS(RadialGrid(10.0, 31));   // too few
  CHECK_THROWS(RadialGrid(-1.0, 101));
  RadialGrid g(10.0, 101);
  CHECK(g.node(g.center()) == 0.0);
  CHECK(g.node(0) == -g.node(g.n_points - 1));
  CHECK(g.h == doctest::Approx(0.2));
}

TEST_CASE("adaptive quadrature hits known integrals") {
  auto cube = [](double x) { return x * x * x; };
  CHECK(integrate(cube, 0.0, 2.0).value == doctest::Approx(4.0).epsilon(1e-12));
  auto decay = [](double x) { return 1.0 / ((1.0 + x * x)); };
  CHECK(integrate_to_infinity(decay, 0.0).value ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-10));
}

TEST_CASE("profile: endpoint values, oddness, first integral") {
  RadialGrid g(20.0, 801);
  CatenoidProfile p = solve_profile(g);
  const int c = g.center();
  CHECK(p.f_values[c] == 1.0);
  CHECK(p.z_values[c] == 0.0);
  for (int i = 0; i < g.n_points; ++i) {
    CHECK(p.z_values[i] == -p.z_values[2 * c - i]);  // exact by construction
    CHECK(std::abs(p.z_values[i]) < p.S);
    // from the closed forms f = <rho>, f'^2 = f^4 - 1
    const double f = p.f_values[i];
    const double resid = std::abs(f * f / std::sqrt(f * f * f * f) - 1.0);
    CHECK(resid < 1e-10);
  }
  // monotone approach to the planes
  for (int i = c; i + 1 < g.n_points; ++i) CHECK(p.z_values[i + 1] > p.z_values[i]);
  CHECK(p.z_values.back() < p.S);
  CHECK(p.z_values.back() > p.S - 0.06);  // tail of dZ beyond rho_max=20 is ~1/20
  CHECK(p.z_values.back() == doctest::Approx(axial_coordinate(20.0)).epsilon(1e-3));
}

TEST_CASE("plane separation: derived form and published variant disagree") {
  // the first integral gives S = int_1^inf df/sqrt(f^4-1); the (f^4+1)^(1/2)
  // variant that appears in print is reported alongside, never used
  const double S = plane_separation();
  CHECK(S == doctest::Approx(1.3110287771460).epsilon(1e-11));
  const double Sp = plane_separation_printed_variant();
  CHECK(Sp == doctest::Approx(0.9270373386507).epsilon(1e-11));
  CHECK(S != Sp);
}

TEST_CASE("first-integral residual from finite-differenced z is O(h^2)") {
  std::vector<double> hs, errs;
  for (int np : {401, 801}) {
    RadialGrid g(20.0, np);
    CatenoidProfile p = solve_profile(g);
    // f as a function of z: f' = (df/drho)/(dz/drho) by centered differences
    double worst = 0.0;
    for (int i = 2; i + 2 < g.n_points; ++i) {
      const double df = (p.f_values[i + 1] - p.f_values[i - 1]);
      const double dz = (p.z_values[i + 1] - p.z_values[i - 1]);
      if (std::abs(g.node(i)) < 0.2) continue;  // dz/df degenerates at the collar
      const double fp = df / dz;
      const double f = p.f_values[i];
      worst = std::max(worst, std::abs(f * f / std::sqrt(1.0 + fp * fp) - 1.0));
    }
    hs.push_back(g.h);
    errs.push_back(worst);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(std::log2(errs[0] / errs[1]) > 1.5);
}

TEST_CASE("second fundamental form from the embedded curve matches the potential") {
  // finite-difference curvature oracle on rho -> (R, Z) = (<rho>, Z(rho)),
  // evaluated before trusting the closed form V = 6 <rho>^-6
  auto kappa = [](double rho, double& km, double& ka) {
    const double d = 1e-4;
    auto R = [](double x) { return std::sqrt(1.0 + x * x); };
    auto Z = [](double x) { return axial_coordinate(x); };
    const double rp = (R(rho + d) - R(rho - d)) / (2 * d);
    const double rpp = (R(rho + d) - 2 * R(rho) + R(rho - d)) / (d * d);
    const double zp = (Z(rho + d) - Z(rho - d)) / (2 * d);
    const double zpp = (Z(rho + d) - 2 * Z(rho) + Z(rho - d)) / (d * d);
    const double s2 = rp * rp + zp * zp;
    km = (rp * zpp - zp * rpp) / std::pow(s2, 1.5);
    ka = zp / (R(rho) * std::sqrt(s2));
  };
  for (double rho : {0.0, 0.7, 2.0, 5.0}) {
    double km, ka;
    kappa(rho, km, ka);
    CHECK(km == doctest::Approx(-2.0 * ka).epsilon(5e-4));  // vanishing mean curvature
    const double v_fd = km * km + 2.0 * ka * ka;
    CHECK(v_fd == doctest::Approx(closed::potential(rho)).epsilon(1e-3));
  }
  double km, ka;
  kappa(0.0, km, ka);
  CHECK(km * km + 2.0 * ka * ka == doctest::Approx(6.0).epsilon(1e-5));
}

TEST_CASE("metric data: collar values, ratio identity, parity") {
  RadialGrid g(50.0, 2001);
  MetricData m = metric_data(g);
  const int c = g.center();
  CHECK(m.weight[c] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(m.flux[c] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  for (int i = 0; i < g.n_points; ++i) {
    CHECK(m.weight[i] > 0.0);
    CHECK(m.flux[i] > 0.0);
    // flux/weight = 1 + <rho>^-2, checked against independent evaluation
    const double ratio = m.flux[i] / m.weight[i];
    const double indep = 1.0 + 1.0 / (1.0 + g.node(i) * g.node(i));
    CHECK(ratio == doctest::Approx(indep).epsilon(1e-13));
    CHECK(ratio > 1.0);
    CHECK(ratio <= 2.0);
    CHECK(m.weight[i] == m.weight[2 * c - i]);
    CHECK(m.flux[i] == m.flux[2 * c - i]);
  }
  CHECK(m.flux.back() / m.weight.back() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("potential: positive, even, <rho>^6-normalized") {
  RadialGrid g(50.0, 2001);
  PotentialData v = potential(g);
  const int c = g.center();
  CHECK(v.values[c] == doctest::Approx(6.0).epsilon(1e-14));
  for (int i = 0; i < g.n_points; ++i) {
    CHECK(v.values[i] > 0.0);
    CHECK(v.values[i] == v.values[2 * c - i]);
    const double j2 = 1.0 + g.node(i) * g.node(i);
    const double scaled = v.values[i] * j2 * j2 * j2;
    CHECK(scaled > 0.0);
    CHECK(scaled <= 6.0 + 1e-12);
  }
  const double tail = v.values.back() * std::pow(1.0 + 50.0 * 50.0, 3.0);
  CHECK(tail == doctest::Approx(6.0).epsilon(0.01));
}

TEST_CASE("special modes: values, parity, asymptotics") {
  RadialGrid g(40.0, 1601);
  SpecialModes s = special_modes(g);
  const int c = g.center();
  CHECK(s.nu0[c] == 1.0);
  CHECK(s.phi_odd[c] == 0.0);
  CHECK(s.phi_even[c] == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < g.n_points; ++i) {
    CHECK(s.nu0[i] > 0.0);
    CHECK(s.nu0[i] == s.nu0[2 * c - i]);
    CHECK(s.phi_odd[i] == -s.phi_odd[2 * c - i]);
    CHECK(s.phi_even[i] == s.phi_even[2 * c - i]);
  }
  CHECK(std::abs(s.phi_odd.back()) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(s.phi_odd.back() > 0.0);
  CHECK(s.phi_odd.front() < 0.0);
  // scaling mode flattens to a constant at the ends
  const double d_end = s.phi_even[g.n_points - 1] - s.phi_even[g.n_points - 41];
  CHECK(std::abs(d_end) < 5e-3);
}

TEST_CASE("zero modes are annihilated under refinement") {
  double prev = 0.0;
  for (int np : {401, 801}) {
    RadialGrid g(20.0, np);
    GeometryBundle geom = make_geometry(g);
    SectorOperator h0 = assemble(0, geom), h1 = assemble(1, geom);
    const double r1 = h1.norm_w_interior(h1.apply(geom.modes.nu0));
    const double r2 = h0.norm_w_interior(h0.apply(geom.modes.phi_odd));
    const double r3 = h0.norm_w_interior(h0.apply(geom.modes.phi_even));
    if (prev > 0.0) {
      CHECK(r1 < 0.3 * prev);
    }
    prev = r1;
    CHECK(r2 < 0.05);
    CHECK(r3 < 0.05);
  }
}
