#include "catenoid/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "catenoid/quadrature.hpp"

namespace catenoid {

namespace {

// integrand of Z(rho): dZ/drho = 1/(<rho> sqrt(<rho>^2+1)), smooth on the line
double zprime(double rho) { return closed::z_prime(rho); }

// S = int_0^inf dZ. Split at rho=1 and substitute u = 1/rho on the tail:
// int_1^inf drho/(sqrt(1+rho^2) sqrt(2+rho^2)) = int_0^1 du/(sqrt(1+u^2) sqrt(1+2u^2)).
double S_derived(double tol) {
  QuadResult head = integrate([](double r) { return zprime(r); }, 0.0, 1.0, tol);
  QuadResult tail = integrate(
      [](double u) { return 1.0 / std::sqrt((1.0 + u * u) * (1.0 + 2.0 * u * u)); }, 0.0, 1.0,
      tol);
  if (!head.converged || !tail.converged)
    throw std::runtime_error("plane_separation: quadrature did not converge");
  return head.value + tail.value;
}

// The published variant int_1^inf df (f^4+1)^{-1/2}; u = 1/f removes the
// infinite endpoint. Reported for comparison, never used downstream.
double S_printed(double tol) {
  QuadResult r = integrate(
      [](double u) { return 1.0 / std::sqrt(1.0 + u * u * u * u); }, 0.0, 1.0, tol);
  if (!r.converged) throw std::runtime_error("plane_separation variant: quadrature failed");
  return r.value;
}

}  // namespace

double axial_coordinate(double rho, double tol) {
  const double s = rho < 0 ? -1.0 : 1.0;
  QuadResult r = integrate([](double x) { return zprime(x); }, 0.0, std::abs(rho), tol);
  if (!r.converged) throw std::runtime_error("axial_coordinate: quadrature did not converge");
  return s * r.value;
}

double plane_separation(double tol) { return S_derived(tol); }
double plane_separation_printed_variant(double tol) { return S_printed(tol); }

CatenoidProfile solve_profile(const RadialGrid& grid) {
  const int n = grid.n_points;
  const int c = grid.center();
  CatenoidProfile p;
  p.f_values.resize(n);
  p.z_values.assign(n, 0.0);
  for (int i = 0; i < n; ++i) p.f_values[i] = closed::jap(grid.node(i));

  // cumulative trapezoid from the center outwards; odd symmetry is exact
  // because the node set is symmetric and z(-rho) := -z(rho).
  for (int i = c + 1; i < n; ++i) {
    const double a = grid.node(i - 1), b = grid.node(i);
    p.z_values[i] = p.z_values[i - 1] + 0.5 * grid.h * (zprime(a) + zprime(b));
  }
  for (int i = 0; i < c; ++i) p.z_values[i] = -p.z_values[2 * c - i];

  p.S = S_derived(1e-10);
  p.S_printed_variant = S_printed(1e-10);
  return p;
}

MetricData metric_data(const RadialGrid& grid) {
  const int n = grid.n_points;
  MetricData m;
  m.weight.resize(n);
  m.flux.resize(n);
  m.inv_rho2.resize(n);
  for (int i = 0; i < n; ++i) {
    const double rho = grid.node(i);
    m.weight[i] = closed::weight(rho);
    m.flux[i] = closed::flux(rho);
    m.inv_rho2[i] = 1.0 / closed::jap2(rho);
  }
  return m;
}

PotentialData potential(const RadialGrid& grid) {
  const int n = grid.n_points;
  PotentialData v;
  v.values.resize(n);
  for (int i = 0; i < n; ++i) v.values[i] = closed::potential(grid.node(i));
  return v;
}

SpecialModes special_modes(const RadialGrid& grid) {
  const int n = grid.n_points;
  const int c = grid.center();
  SpecialModes s;
  s.nu0.resize(n);
  s.phi_odd.resize(n);
  s.phi_even.resize(n);
  s.z_prime.resize(n);
  double Z = 0.0;
  for (int i = c; i < n; ++i) {
    const double rho = grid.node(i);
    s.nu0[i] = closed::nu0(rho);
    s.phi_odd[i] = closed::phi_odd(rho);
    s.z_prime[i] = closed::z_prime(rho);
    if (i > c) Z += integrate([](double x) { return closed::z_prime(x); }, grid.node(i - 1), rho, 1e-12).value;
    // scaling zero mode: (<rho> Z' - (rho/<rho>) Z) / (Z'/<rho>^2 + rho^2 sqrt(<rho>^2+1)/<rho>^3)
    // Z from adaptive quadrature so the mode is grid-converged on its own.
    const double Zp = s.z_prime[i];
    const double j = closed::jap(rho);
    const double num = j * Zp - (rho / j) * Z;
    const double den = Zp / (j * j) + rho * rho * std::sqrt(j * j + 1.0) / (j * j * j);
    s.phi_even[i] = num / den;
  }
  for (int i = 0; i < c; ++i) {
    s.nu0[i] = s.nu0[2 * c - i];
    s.phi_odd[i] = -s.phi_odd[2 * c - i];
    s.phi_even[i] = s.phi_even[2 * c - i];
    s.z_prime[i] = s.z_prime[2 * c - i];
  }
  return s;
}

GeometryBundle make_geometry(const RadialGrid& grid) {
  return GeometryBundle{grid, solve_profile(grid), metric_data(grid), potential(grid),
                        special_modes(grid)};
}

}  // namespace catenoid
