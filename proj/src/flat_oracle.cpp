#include "catenoid/flat_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "catenoid/quadrature.hpp"

namespace catenoid {

namespace {

// antiderivative G(x) = int_0^x r' <r'>^-a dr' for the power profiles
double power_antiderivative(int a, double x) {
  const double j2 = 1.0 + x * x;
  if (a == 3) return 1.0 - 1.0 / std::sqrt(j2);
  if (a == 4) return 0.5 * (1.0 - 1.0 / j2);
  throw std::invalid_argument("flat oracle: spatial exponent must be 3 or 4");
}

// int_0^{|x|} r' f_rad(r') dr' with the optional exterior cutoff; even in x
double cumulative(const TailSource& src, double x) {
  const double ax = std::abs(x);
  if (ax <= src.r0) return 0.0;
  return power_antiderivative(src.a, ax) - power_antiderivative(src.a, src.r0);
}

double time_factor(const TailSource& src, double t) {
  if (t < src.t0) return 0.0;
  const double s = t - src.t0;
  return std::pow(1.0 + s * s, -0.5 * src.b);
}

double bump_c2(double s) {  // support (0,1), peak 1
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double u = s * (1.0 - s);
  return 64.0 * u * u * u;
}

}  // namespace

double dalembert(const TailSource& src, double t, double r, double tol) {
  if (t <= 0.0) return 0.0;
  if (!(r > 0.0)) throw std::invalid_argument("dalembert: needs r > 0");

  std::function<double(double)> integrand;
  if (src.kind == TailSource::Kind::power) {
    integrand = [&src, t, r](double tp) {
      const double s = t - tp;
      return time_factor(src, tp) * (cumulative(src, r + s) - cumulative(src, r - s));
    };
  } else {
    // compact bump: inner radial integral by adaptive quadrature over the
    // overlap of [r-s, r+s] with the (odd-extended) support
    integrand = [&src, t, r](double tp) {
      const double s = t - tp;
      const double tf = bump_c2(tp / src.t_support);
      if (tf == 0.0) return 0.0;
      auto radial = [&src](double x) {
        return x * bump_c2(std::abs(x) / src.r_support);  // odd in x
      };
      const double lo = std::max(r - s, -src.r_support);
      const double hi = std::min(r + s, src.r_support);
      if (lo >= hi) return 0.0;
      return tf * integrate(radial, lo, hi, 1e-11).value;
    };
  }
  const double t_on = src.kind == TailSource::Kind::power ? std::max(0.0, src.t0) : 0.0;
  if (t_on >= t) return 0.0;
  QuadResult q = integrate(integrand, t_on, t, tol, 1e-300);
  if (!q.converged) throw std::runtime_error("dalembert: quadrature failure");
  // forward solution of -v_tt + v_rr = r f, so the triangle integral enters
  // with a minus sign
  return -0.5 * q.value / r;
}

DichotomyResult dichotomy_experiment(int a, double b, double r_probe, double t_lo, double t_hi,
                                     int n_samples) {
  TailSource src;
  src.kind = TailSource::Kind::power;
  src.a = a;
  src.b = b;
  DichotomyResult out;
  for (int i = 0; i < n_samples; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n_samples - 1));
    out.times.push_back(t);
    out.values.push_back(dalembert(src, t, r_probe));
  }
  DecayFit fit = decay_fit(out.times, out.values, t_lo * 0.99, t_hi * 1.01);
  out.exponent = fit.exponent;
  out.stderr_exponent = fit.stderr_exponent;
  return out;
}

CrossValidation cross_validate(const TailSource& src, double r_probe, double t_final, double h,
                               double dt_safety) {
  // conjugated flat problem on [0, R] with causally silent outer boundary
  const double r_max = t_final + (src.kind == TailSource::Kind::power ? t_final : src.r_support) +
                       2.0;
  const int n = static_cast<int>(std::round(r_max / h)) + 1;
  SectorBackground<double> bg = flat_background<double>(h * (n - 1), n);

  SourceSpec grid_src;
  grid_src.kind = SourceSpec::Kind::separable;
  grid_src.sector = 0;
  grid_src.radial_profile.resize(n);
  for (int i = 0; i < n; ++i) {
    const double r = bg.rho[i];
    // v-equation source is r f; sign convention: (-d_t^2 + H) v = source
    if (src.kind == TailSource::Kind::power) {
      const double f = r <= src.r0 ? 0.0 : std::pow(1.0 + r * r, -0.5 * src.a);
      grid_src.radial_profile[i] = r * f;
    } else {
      grid_src.radial_profile[i] = r * bump_c2(r / src.r_support);
    }
  }
  if (src.kind == TailSource::Kind::power) {
    grid_src.time_kind = SourceSpec::TimeProfile::inv_pow;
    grid_src.exponent = src.b;
  } else {
    grid_src.time_kind = SourceSpec::TimeProfile::bump;
    grid_src.t0 = 0.0;
    grid_src.width = src.t_support;
  }

  const double dt = dt_safety * h;
  Leapfrog<double> lf(bg, dt, dt_safety + 0.01);
  std::vector<double> zero(n, 0.0);
  lf.set_data(zero, zero, 0.0, &grid_src);

  const int probe_index = static_cast<int>(std::round(r_probe / h));
  if (std::abs(bg.rho[probe_index] - r_probe) > 1e-9)
    throw std::invalid_argument("cross_validate: probe must sit on a grid node");

  CrossValidation out;
  const long n_steps = std::lround(t_final / dt);
  const long measure_every = std::max(1L, std::lround(0.5 / dt));
  for (long s = 0; s < n_steps; ++s) {
    if (s % measure_every == 0) {
      lf.step(&grid_src, [&](double t, const std::vector<double>& psi,
                             const std::vector<double>&) {
        out.times.push_back(t);
        out.grid_values.push_back(psi[probe_index] / r_probe);
      });
    } else {
      lf.step(&grid_src);
    }
  }
  for (size_t i = 0; i < out.times.size(); ++i) {
    const double t = out.times[i];
    const double o = t > 0.0 ? dalembert(src, t, r_probe, 1e-10) : 0.0;
    out.oracle_values.push_back(o);
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(o - out.grid_values[i]));
  }
  return out;
}

}  // namespace catenoid
