#ifndef CATENOID_EVOLUTION_HPP
#define CATENOID_EVOLUTION_HPP

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "catenoid/geometry.hpp"
#include "catenoid/grid.hpp"
#include "catenoid/real_math.hpp"

namespace catenoid {

// Separable source for (-d_t^2 + H_ell) psi = source.
struct SourceSpec {
  enum class Kind { none, separable };
  enum class TimeProfile { one, inv_pow, bump };

  Kind kind = Kind::none;
  int sector = 0;
  std::vector<double> radial_profile;  // per node
  TimeProfile time_kind = TimeProfile::one;
  double exponent = 0.0;   // inv_pow: <t - t0>^-exponent, switched on at t >= t0
  double t0 = 0.0;
  double width = 1.0;      // bump support [t0, t0 + width]
  double cutoff_rho0 = 0.0;  // radial profile zeroed for |rho| < cutoff_rho0

  double time_value(double t) const {
    switch (time_kind) {
      case TimeProfile::one:
        return 1.0;
      case TimeProfile::inv_pow: {
        if (t < t0) return 0.0;
        const double s = t - t0;
        return std::pow(1.0 + s * s, -0.5 * exponent);
      }
      case TimeProfile::bump: {
        const double s = (t - t0) / width;
        if (s <= 0.0 || s >= 1.0) return 0.0;
        const double u = s * (1.0 - s);
        return 64.0 * u * u * u;  // C^2, peak 1 at s = 1/2
      }
    }
    return 0.0;
  }
};

// Radial 1+1 wave background: psi_tt = w^-1 (a psi')' + pot psi - source,
// Dirichlet at both ends. Built either from the catenoid geometry bundle
// (per sector) or as the flat conjugated half-line problem v_tt = v_rr.
template <class Real>
struct SectorBackground {
  int ell = 0;
  std::vector<Real> rho;        // nodes
  Real h = Real(0);
  std::vector<Real> weight;     // w_i
  std::vector<Real> flux_half;  // a at midpoints, size n-1
  std::vector<Real> pot;        // V - ell(ell+1)<rho>^-2 (or 0 for flat)
  Real max_speed = Real(1);

  int n() const { return static_cast<int>(rho.size()); }

  void rhs(const std::vector<Real>& psi, std::vector<Real>& out) const {
    const int m = n();
    const Real h2 = h * h;
    out.assign(m, Real(0));
    for (int i = 1; i + 1 < m; ++i) {
      const Real fluxed =
          flux_half[i] * (psi[i + 1] - psi[i]) - flux_half[i - 1] * (psi[i] - psi[i - 1]);
      out[i] = fluxed / (h2 * weight[i]) + pot[i] * psi[i];
    }
  }

  Real inner_w(const std::vector<Real>& u, const std::vector<Real>& v) const {
    Real s = Real(0);
    for (int i = 0; i < n(); ++i) s += u[i] * v[i] * weight[i];
    return s * h;
  }
};

template <class Real>
SectorBackground<Real> catenoid_background(const GeometryBundle& geom, int ell) {
  SectorBackground<Real> bg;
  bg.ell = ell;
  const int n = geom.grid.n_points;
  bg.rho.resize(n);
  bg.weight.resize(n);
  bg.pot.resize(n);
  bg.flux_half.resize(n - 1);
  bg.h = Real(geom.grid.h);
  const Real ll1 = Real(ell * (ell + 1));
  for (int i = 0; i < n; ++i) {
    const Real r = Real(geom.grid.node(i));
    bg.rho[i] = r;
    const Real j2 = Real(1) + r * r;
    bg.weight[i] = j2 * sqrt(j2 / (Real(1) + j2));
    bg.pot[i] = Real(6) / (j2 * j2 * j2) - ll1 / j2;
  }
  for (int i = 0; i + 1 < n; ++i) {
    const Real r = Real(geom.grid.node(i)) + Real(geom.grid.h) / Real(2);
    const Real j2 = Real(1) + r * r;
    bg.flux_half[i] = sqrt(j2 * (Real(1) + j2));
  }
  bg.max_speed = sqrt(Real(2));
  return bg;
}

// flat 3d radial wave for the conjugated field v = r u on [0, r_max]
template <class Real>
SectorBackground<Real> flat_background(double r_max, int n) {
  SectorBackground<Real> bg;
  bg.ell = 0;
  bg.h = Real(r_max) / Real(n - 1);
  bg.rho.resize(n);
  for (int i = 0; i < n; ++i) bg.rho[i] = Real(i) * bg.h;
  bg.weight.assign(n, Real(1));
  bg.flux_half.assign(n - 1, Real(1));
  bg.pot.assign(n, Real(0));
  bg.max_speed = Real(1);
  return bg;
}

// Growing-mode freeze for long stabilized runs: removes, in the exact
// eigenplane of the discrete step map, the expanding component of the
// (psi, pi) pair. mode must be w-normalized with H mode = mu2 mode.
template <class Real>
struct ModeFreeze {
  std::vector<Real> mode;
  Real mu2 = Real(0);
};

// Leapfrog with staggered momentum; canonical state (psi at t, pi at t-dt/2).
template <class Real>
class Leapfrog {
 public:
  Leapfrog(SectorBackground<Real> bg, Real dt, double cfl_safety = 0.75)
      : bg_(std::move(bg)), dt_(dt) {
    if (!(dt > Real(0)) || dt > Real(cfl_safety) * bg_.h / bg_.max_speed)
      throw std::invalid_argument("Leapfrog: time step violates the CFL bound");
  }

  // data: psi0, v0 = d_t psi at t0; Dirichlet values forced at the ends
  void set_data(std::vector<Real> psi0, const std::vector<Real>& v0, Real t0,
                const SourceSpec* src = nullptr) {
    psi_ = std::move(psi0);
    const int m = bg_.n();
    psi_[0] = psi_[m - 1] = Real(0);
    time_ = t0;
    std::vector<Real> acc;
    accel(psi_, time_, src, acc);
    pi_.resize(m);
    for (int i = 0; i < m; ++i) pi_[i] = v0[i] - (dt_ / Real(2)) * acc[i];
    pi_[0] = pi_[m - 1] = Real(0);
  }

  // one step; the callback (optional) sees (t, psi, centered d_t psi) at the
  // pre-step integer time
  template <class Callback>
  void step(const SourceSpec* src, Callback&& on_measure) {
    std::vector<Real> acc;
    accel(psi_, time_, src, acc);
    const int m = bg_.n();
    pi_next_.resize(m);
    for (int i = 0; i < m; ++i) pi_next_[i] = pi_[i] + dt_ * acc[i];
    pi_next_[0] = pi_next_[m - 1] = Real(0);
    if constexpr (!std::is_same_v<std::decay_t<Callback>, std::nullptr_t>) {
      velocity_.resize(m);
      for (int i = 0; i < m; ++i) velocity_[i] = (pi_[i] + pi_next_[i]) / Real(2);
      on_measure(time_, psi_, velocity_);
    }
    for (int i = 1; i + 1 < m; ++i) psi_[i] += dt_ * pi_next_[i];
    pi_.swap(pi_next_);
    time_ += dt_;
  }

  void step(const SourceSpec* src = nullptr) { step(src, nullptr); }

  // exact removal of the expanding eigenplane component of the discrete map
  void freeze_growing(const ModeFreeze<Real>& f) {
    const Real d = dt_;
    const Real m2 = f.mu2;
    const Real tr = Real(2) + d * d * m2;
    const Real gplus = (tr + sqrt(tr * tr - Real(4))) / Real(2);
    const Real slope_p = (gplus - Real(1) - d * d * m2) / d;
    const Real gminus = Real(1) / gplus;
    const Real slope_m = (gminus - Real(1) - d * d * m2) / d;
    const Real alpha = bg_.inner_w(psi_, f.mode);
    const Real beta = bg_.inner_w(pi_, f.mode);
    // (alpha, beta) = a+ (1, slope_p) + a- (1, slope_m)
    const Real aplus = (beta - slope_m * alpha) / (slope_p - slope_m);
    for (int i = 0; i < bg_.n(); ++i) {
      psi_[i] -= aplus * f.mode[i];
      pi_[i] -= aplus * slope_p * f.mode[i];
    }
  }

  Real time() const { return time_; }
  const std::vector<Real>& psi() const { return psi_; }
  const std::vector<Real>& pi_half() const { return pi_; }
  const SectorBackground<Real>& background() const { return bg_; }
  Real dt() const { return dt_; }

  // centered velocity requires a peek at the next half-momentum
  std::vector<Real> velocity(const SourceSpec* src = nullptr) const {
    std::vector<Real> acc;
    accel(psi_, time_, src, acc);
    std::vector<Real> v(bg_.n());
    for (int i = 0; i < bg_.n(); ++i) v[i] = pi_[i] + (dt_ / Real(2)) * acc[i];
    return v;
  }

 private:
  void accel(const std::vector<Real>& psi, Real t, const SourceSpec* src,
             std::vector<Real>& out) const {
    bg_.rhs(psi, out);
    if (src && src->kind == SourceSpec::Kind::separable) {
      const Real tv = Real(src->time_value(static_cast<double>(t)));
      if (tv != Real(0)) {
        const int m = bg_.n();
        for (int i = 1; i + 1 < m; ++i) {
          const double r = static_cast<double>(bg_.rho[i]);
          if (std::abs(r) < src->cutoff_rho0) continue;
          out[i] -= tv * Real(src->radial_profile[i]);
        }
      }
    }
  }

  SectorBackground<Real> bg_;
  Real dt_ = Real(0);
  Real time_ = Real(0);
  std::vector<Real> psi_, pi_, pi_next_, velocity_;
};

// ---------------------------------------------------------------------------
// double-precision state bundles and diagnostics

struct SectorState {
  std::vector<double> psi;
  std::vector<double> pi;  // momentum at t - dt/2 (leapfrog staggering)
};

struct WaveState {
  double time = 0.0;
  std::map<int, SectorState> sectors;
};

struct NormSample {
  double time = 0.0;
  double energy = 0.0;            // ||d_t psi||^2 + ||d_x psi||^2 (no V term)
  double conserved_energy = 0.0;  // adds the -V psi^2 piece; leapfrog monitor
  double le_density = 0.0;        // spatial LE^2 at this time
  double le_running = 0.0;        // int_0^t LE^2 dt'
  double le_star_source = 0.0;    // LE*^2 of the active sources
  double rp_e0 = 0.0, rp_e1 = 0.0, rp_e2 = 0.0;
  std::vector<double> probes;
};

struct NormSeries {
  std::vector<NormSample> samples;
  std::vector<double> probe_locations;
};

struct LeWeights {
  double alpha = 0.1;
  double rp_cutoff = 10.0;  // exterior cutoff R~ for the r^p energies
};

// spatial LE^2 of one sector from (psi, d_t psi)
double le_density_sector(const GeometryBundle& geom, int ell, const std::vector<double>& psi,
                         const std::vector<double>& dpsi_dt, double alpha);

// first-order energy of one sector, centered differences, no potential term
double energy_sector(const GeometryBundle& geom, int ell, const std::vector<double>& psi,
                     const std::vector<double>& dpsi_dt, bool include_potential);

// the quadratic form the leapfrog map conserves: <v,v>_w + <psi,(-H)psi>_w
// with the same flux-form differences as the update stencil
double conserved_energy_sector(const GeometryBundle& geom, int ell,
                               const std::vector<double>& psi,
                               const std::vector<double>& dpsi_dt);

double le_star_sector(const GeometryBundle& geom, const std::vector<double>& field, double alpha);

// r^p outgoing energy, E^p = int chi_{|rho|>=R} |rho|^p ((d_t + sgn(rho) v d_rho)(rho psi))^2 drho
double rp_energy_sector(const GeometryBundle& geom, int ell, const std::vector<double>& psi,
                        const std::vector<double>& dpsi_dt, double p, double r_cutoff);

// bulk r^p density (time integrand of B^p)
double rp_bulk_sector(const GeometryBundle& geom, int ell, const std::vector<double>& psi,
                      const std::vector<double>& dpsi_dt, double p, double r_cutoff);

struct DecayFit {
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  int n_samples = 0;
};

// slope of log|values| against log(times) over [t_lo, t_hi]
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& values,
                   double t_lo, double t_hi);

}  // namespace catenoid

#endif
