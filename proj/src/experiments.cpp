#include "catenoid/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "catenoid/darboux.hpp"
#include "catenoid/evolution.hpp"
#include "catenoid/flat_oracle.hpp"
#include "catenoid/geometry.hpp"
#include "catenoid/modulation.hpp"
#include "catenoid/operators.hpp"
#include "catenoid/shooting.hpp"

namespace catenoid {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::vector<double> gaussian_bump(const RadialGrid& grid, double amplitude, double center,
                                  double width) {
  std::vector<double> f(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double s = (grid.node(i) - center) / width;
    f[i] = amplitude * std::exp(-s * s);
  }
  f.front() = f.back() = 0.0;
  return f;
}

std::vector<double> random_bumps(const RadialGrid& grid, std::mt19937_64& rng, int count,
                                 double reach) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), pos(-reach, reach), wid(0.8, 2.0);
  std::vector<double> f(grid.n_points, 0.0);
  for (int b = 0; b < count; ++b) {
    const double a = amp(rng), c = pos(rng), w = wid(rng);
    for (int i = 0; i < grid.n_points; ++i) {
      const double s = (grid.node(i) - c) / w;
      f[i] += a * std::exp(-s * s);
    }
  }
  f.front() = f.back() = 0.0;
  return f;
}

// least-squares convergence order from errors at h, h/2, h/4, ...
double fitted_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  const int m = static_cast<int>(hs.size());
  double xm = 0, ym = 0;
  for (int i = 0; i < m; ++i) {
    xm += std::log(hs[i]);
    ym += std::log(errs[i]);
  }
  xm /= m;
  ym /= m;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sxx += (std::log(hs[i]) - xm) * (std::log(hs[i]) - xm);
    sxy += (std::log(hs[i]) - xm) * (std::log(errs[i]) - ym);
  }
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// multi-sector decay run with the unstable direction frozen and the
// kernel/eigen projections removed at measurement time

struct DecaySeries {
  std::vector<double> times;
  std::vector<double> le_density;   // summed over sectors, projected
  std::vector<double> le_running;
  std::vector<double> e1, e2;       // projected r^p energies
};

DecaySeries decay_run(const GeometryBundle& geom, const SpectrumReport& spec, const ZVectors& zv,
                      double t_final, double dt_safety, double alpha, double rp_cutoff,
                      double measure_dt, bool project = true) {
  const double dt = dt_safety * geom.grid.h / std::sqrt(2.0);
  const int n = geom.grid.n_points;
  const double mu = std::sqrt(*spec.mu2);

  std::vector<int> sectors{0, 1, 2};
  std::map<int, Leapfrog<double>> lf;
  for (int ell : sectors) {
    lf.emplace(ell, Leapfrog<double>(catenoid_background<double>(geom, ell), dt,
                                     dt_safety + 0.01));
  }
  lf.at(0).set_data(gaussian_bump(geom.grid, 1.0, 3.0, 1.5), std::vector<double>(n, 0.0), 0.0);
  lf.at(1).set_data(gaussian_bump(geom.grid, 1.0, 2.0, 1.5), std::vector<double>(n, 0.0), 0.0);
  lf.at(2).set_data(gaussian_bump(geom.grid, 0.7, 4.0, 1.5), std::vector<double>(n, 0.0), 0.0);

  ModeFreeze<double> freeze{spec.phi_mu, *spec.mu2};

  DecaySeries out;
  const long n_steps = std::lround(t_final / dt);
  const long measure_every = std::max(1L, std::lround(measure_dt / dt));
  double le_accum = 0.0;
  double last_t = 0.0, last_density = -1.0;

  for (long s = 0; s <= n_steps; ++s) {
    const bool measure = (s % measure_every == 0) || s == n_steps;
    double density = 0.0, e1 = 0.0, e2 = 0.0;
    double t_now = 0.0;
    for (int ell : sectors) {
      auto measure_cb = [&](double t, const std::vector<double>& psi,
                            const std::vector<double>& vel) {
        t_now = t;
        std::vector<double> psi_p = psi, v_p = vel;
        if (project && ell == 0) {
          FirstOrderVector fo = make_first_order(geom, 0, psi, vel);
          auto [ap, am] = project_unstable(geom, zv, fo);
          for (int i = 0; i < n; ++i) {
            psi_p[i] -= ap * zv.z_plus.psi[i] + am * zv.z_minus.psi[i];
            v_p[i] -= (ap - am) * mu * zv.z_plus.psi[i];
          }
        } else if (project && ell == 1) {
          FirstOrderVector fo = make_first_order(geom, 1, psi, vel);
          auto [c1, c4] = project_kernel(geom, zv, fo);
          for (int i = 0; i < n; ++i) {
            psi_p[i] -= c1 * geom.modes.nu0[i];
            v_p[i] -= c4 * geom.modes.nu0[i];
          }
        }
        density += le_density_sector(geom, ell, psi_p, v_p, alpha);
        e1 += rp_energy_sector(geom, ell, psi_p, v_p, 1.0, rp_cutoff);
        e2 += rp_energy_sector(geom, ell, psi_p, v_p, 2.0, rp_cutoff);
      };
      if (measure)
        lf.at(ell).step(nullptr, measure_cb);
      else
        lf.at(ell).step();
      if (ell == 0) lf.at(0).freeze_growing(freeze);
    }
    if (measure) {
      if (last_density >= 0.0) le_accum += 0.5 * (density + last_density) * (t_now - last_t);
      out.times.push_back(t_now);
      out.le_density.push_back(density);
      out.le_running.push_back(le_accum);
      out.e1.push_back(e1);
      out.e2.push_back(e2);
      last_t = t_now;
      last_density = density;
    }
  }
  return out;
}

DecaySeries decay_run_unprojected(const GeometryBundle& geom, const SpectrumReport& spec,
                                  const ZVectors& zv, double t_final, double dt_safety,
                                  double alpha, double rp_cutoff, double measure_dt) {
  return decay_run(geom, spec, zv, t_final, dt_safety, alpha, rp_cutoff, measure_dt, false);
}

// ---------------------------------------------------------------------------
// criteria

CriterionResult c1_geometry() {
  CriterionResult r{1, "geometry: first integral + z convergence", false, {}, "", 0.0};
  const auto t0 = clock_type::now();

  RadialGrid grid(50.0, 2001);
  CatenoidProfile prof = solve_profile(grid);
  double resid = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    const double f = prof.f_values[i];
    const double fp2 = f * f * f * f - 1.0;
    resid = std::max(resid, std::abs(f * f / std::sqrt(1.0 + fp2) - 1.0));
  }

  std::vector<double> hs, errs;
  for (int np : {401, 801, 1601}) {
    RadialGrid g(20.0, np);
    CatenoidProfile p = solve_profile(g);
    double err = 0.0;
    for (int i = 0; i < g.n_points; i += 8)
      err = std::max(err, std::abs(p.z_values[i] - axial_coordinate(g.node(i))));
    hs.push_back(g.h);
    errs.push_back(err);
  }
  const double order = fitted_order(hs, errs);

  r.measured = {{"first_integral_residual", resid},
                {"z_convergence_order", order},
                {"S_derived", prof.S},
                {"S_printed_variant", prof.S_printed_variant}};
  r.pass = resid < 1e-10 && order >= 1.9;
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c2_kernels() {
  CriterionResult r{2, "kernel exactness under refinement", false, {}, "", 0.0};
  const auto t0 = clock_type::now();
  std::vector<double> hs, e_nu0, e_odd, e_even;
  for (int np : {401, 801, 1601}) {
    RadialGrid g(20.0, np);
    GeometryBundle geom = make_geometry(g);
    SectorOperator h1 = assemble(1, geom), h0 = assemble(0, geom);
    hs.push_back(g.h);
    e_nu0.push_back(h1.norm_w_interior(h1.apply(geom.modes.nu0)));
    e_odd.push_back(h0.norm_w_interior(h0.apply(geom.modes.phi_odd)));
    e_even.push_back(h0.norm_w_interior(h0.apply(geom.modes.phi_even)));
  }
  const double o1 = fitted_order(hs, e_nu0);
  const double o2 = fitted_order(hs, e_odd);
  const double o3 = fitted_order(hs, e_even);
  r.measured = {{"order_H1_nu0", o1}, {"order_H0_phi_odd", o2}, {"order_H0_phi_even", o3}};
  r.pass = o1 >= 1.9 && o2 >= 1.9 && o3 >= 1.9;
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c3_spectrum() {
  CriterionResult r{3, "spectrum: unique unstable mode, two-route mu^2", false, {}, "", 0.0};
  const auto t0 = clock_type::now();
  RadialGrid grid(60.0, 4801);
  GeometryBundle geom = make_geometry(grid);
  SpectrumReport s0 = sector_spectrum(assemble(0, geom), geom);
  SpectrumReport s1 = sector_spectrum(assemble(1, geom), geom);
  SpectrumReport s2 = sector_spectrum(assemble(2, geom), geom);
  SpectrumReport s3 = sector_spectrum(assemble(3, geom), geom);
  const double mu2 = s0.mu2.value_or(0.0);
  const double mu2_sh = s0.mu2_shooting.value_or(-1.0);
  const double rel = mu2 > 0 ? std::abs(mu2 - mu2_sh) / mu2 : 1.0;
  r.measured = {{"H0_positive_count", double(s0.positive_count)},
                {"mu2_matrix", mu2},
                {"mu2_shooting", mu2_sh},
                {"mu2_two_route_rel_diff", rel},
                {"H1_positive_count_deflated", double(s1.positive_count)},
                {"H1_kernel_shadow", s1.kernel_shadow.value_or(0.0)},
                {"H2_positive_count", double(s2.positive_count)},
                {"H3_positive_count", double(s3.positive_count)}};
  r.pass = s0.positive_count == 1 && rel < 1e-6 && s1.positive_count == 0 &&
           s2.positive_count == 0 && s3.positive_count == 0;
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c4_darboux(std::uint64_t seed) {
  CriterionResult r{4, "darboux: factorization, partner spectrum, roundtrip", false, {}, "", 0.0};
  const auto t0 = clock_type::now();
  std::vector<double> hs, defects, roundtrips;
  int eigencount = -1;
  double vtilde = 0.0;
  for (int np : {801, 1601, 3201}) {
    RadialGrid g(40.0, np);
    GeometryBundle geom = make_geometry(g);
    DarbouxContext ctx = make_darboux_context(geom);
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> samples;
    std::uniform_real_distribution<double> pos(-10.0, 10.0), wid(0.5, 2.0);
    for (int k = 0; k < 10; ++k) {
      const double c = pos(rng), w = wid(rng);
      samples.push_back(gaussian_bump(g, 1.0, c, w));
    }
    hs.push_back(g.h);
    defects.push_back(factorization_defect(ctx, geom, samples));

    // roundtrip on the first bump through the transformed normalization
    SectorOperator h1 = assemble(1, geom);
    const std::vector<double>& phi = samples.front();
    std::vector<double> z0(g.n_points);
    double datum = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
      z0[i] = cutoff_bump(g.node(i), 8.0) * geom.modes.nu0[i];
      datum += phi[i] * z0[i] * geom.metric.weight[i] * g.h;
    }
    std::vector<double> u = to_transformed_normalization(ctx, darboux_apply(ctx, phi, 1));
    std::vector<double> back = darboux_invert(ctx, u, datum, 8.0);
    double err = 0.0, scale = 0.0;
    for (int i = 2; i + 2 < g.n_points; ++i) {
      err = std::max(err, std::abs(back[i] - phi[i]));
      scale = std::max(scale, std::abs(phi[i]));
    }
    roundtrips.push_back(err / scale);

    if (np == 3201) {
      TransformedOperatorReport rep = transformed_operator(ctx);
      eigencount = rep.eigencount_above_tol;
      vtilde = rep.vtilde_decay_constant;
    }
  }
  const double o_def = fitted_order(hs, defects);
  const double o_rt = fitted_order(hs, roundtrips);
  r.measured = {{"factorization_order", o_def},
                {"factorization_defect_finest", defects.back()},
                {"roundtrip_order", o_rt},
                {"roundtrip_error_finest", roundtrips.back()},
                {"partner_eigencount_above_tol", double(eigencount)},
                {"vtilde_decay_constant", vtilde}};
  r.pass = o_def >= 1.9 && o_rt >= 1.9 && eigencount == 0 && std::isfinite(vtilde);
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c5_evolution() {
  CriterionResult r{5, "evolution: drift, order, boundary silence", false, {}, "", 0.0};
  const auto t0 = clock_type::now();

  // energy drift in a spectrally non-positive sector (pinned h, dt)
  double drift;
  {
    RadialGrid g(40.0, 1601);
    GeometryBundle geom = make_geometry(g);
    Leapfrog<double> lf(catenoid_background<double>(geom, 2), 0.02, 0.6);
    const int n = g.n_points;
    lf.set_data(gaussian_bump(g, 1.0, 3.0, 2.0), std::vector<double>(n, 0.0), 0.0);
    double e0 = -1.0, ef = 0.0;
    const long n_steps = std::lround(20.0 / 0.02);
    for (long s = 0; s <= n_steps; ++s)
      lf.step(nullptr, [&](double, const std::vector<double>& psi,
                           const std::vector<double>& vel) {
        ef = conserved_energy_sector(geom, 2, psi, vel);
        if (e0 < 0.0) e0 = ef;
      });
    drift = std::abs(ef - e0) / e0;
  }

  // Richardson order at T = 10 against grid halving
  double order;
  {
    std::vector<double> hs, vals;
    for (int np : {801, 1601, 3201}) {
      RadialGrid g(40.0, np);
      GeometryBundle geom = make_geometry(g);
      const double dt = 0.2 * g.h;
      Leapfrog<double> lf(catenoid_background<double>(geom, 2), dt, 0.3);
      lf.set_data(gaussian_bump(g, 1.0, 3.0, 1.5), std::vector<double>(g.n_points, 0.0), 0.0);
      const long n_steps = std::lround(10.0 / dt);
      for (long s = 0; s < n_steps; ++s) lf.step();
      const int probe = g.center() + static_cast<int>(std::round(2.0 / g.h));
      hs.push_back(g.h);
      vals.push_back(lf.psi()[probe]);
    }
    const double e1 = std::abs(vals[0] - vals[1]);
    const double e2 = std::abs(vals[1] - vals[2]);
    order = std::log2(e1 / e2);
  }

  // boundary silence: doubling the domain leaves the causal region bit-identical
  bool silent = true;
  {
    RadialGrid g1(30.0, 1201), g2(60.0, 2401);
    GeometryBundle geomA = make_geometry(g1), geomB = make_geometry(g2);
    const double dt = 0.4 * g1.h / std::sqrt(2.0);
    Leapfrog<double> a(catenoid_background<double>(geomA, 2), dt, 0.41);
    Leapfrog<double> b(catenoid_background<double>(geomB, 2), dt, 0.41);
    a.set_data(gaussian_bump(g1, 1.0, 0.0, 1.5), std::vector<double>(g1.n_points, 0.0), 0.0);
    b.set_data(gaussian_bump(g2, 1.0, 0.0, 1.5), std::vector<double>(g2.n_points, 0.0), 0.0);
    const long n_steps = std::lround(10.0 / dt);
    for (long s = 0; s < n_steps; ++s) {
      a.step();
      b.step();
    }
    const double causal = 30.0 - std::sqrt(2.0) * 10.0 - 1.0;
    for (int i = 0; i < g1.n_points; ++i) {
      if (std::abs(g1.node(i)) > causal) continue;
      const int j = g2.center() + (i - g1.center());
      if (a.psi()[i] != b.psi()[j]) {
        silent = false;
        break;
      }
    }
  }

  r.measured = {{"energy_drift", drift}, {"richardson_order", order},
                {"boundary_silence", silent ? 1.0 : 0.0}};
  r.pass = drift <= 1e-4 && order >= 1.9 && silent;
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c6_growth() {
  CriterionResult r{6, "unstable growth rates from seeded modes", false, {}, "", 0.0};
  const auto t0 = clock_type::now();
  RadialGrid grid(40.0, 1601);
  GeometryBundle geom = make_geometry(grid);
  SpectrumReport spec = sector_spectrum(assemble(0, geom), geom);
  ZVectors zv = make_zvectors(geom, spec, 8.0);
  DirectionClassification cls = classify_directions(geom, spec, zv, 0.02);
  const double mu = std::sqrt(*spec.mu2);
  const double rel_g = std::abs(cls.rate_growing - mu) / mu;
  const double rel_d = std::abs(cls.rate_decaying + mu) / mu;
  r.measured = {{"mu", mu},
                {"rate_growing", cls.rate_growing},
                {"rate_decaying", cls.rate_decaying},
                {"rel_err_growing", rel_g},
                {"rel_err_decaying", rel_d},
                {"growing_is_zplus", cls.growing_is_zplus ? 1.0 : 0.0}};
  r.pass = rel_g < 0.01 && rel_d < 0.01;
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c7_iled() {
  CriterionResult r{7, "ILED boundedness of the projected flow", false, {}, "", 0.0};
  const auto t0 = clock_type::now();
  RadialGrid grid(125.0, 5001);
  GeometryBundle geom = make_geometry(grid);
  SpectrumReport spec = sector_spectrum(assemble(0, geom), geom);
  ZVectors zv = make_zvectors(geom, spec, 8.0);
  DecaySeries run = decay_run(geom, spec, zv, 80.0, 0.4, 0.1, 10.0, 0.5);

  auto running_at = [&](const DecaySeries& s, double t) {
    double best = 0.0, dist = 1e9;
    for (size_t i = 0; i < s.times.size(); ++i) {
      if (std::abs(s.times[i] - t) < dist) {
        dist = std::abs(s.times[i] - t);
        best = s.le_running[i];
      }
    }
    return best;
  };
  const double l40 = running_at(run, 40.0), l80 = running_at(run, 80.0);
  const double growth = (l80 - l40) / l40;

  // contrast: the same flow without removing the kernel projections grows
  // without bound (the boundedness content of the estimate), and the
  // projected density follows the structural t^-(1+alpha) transit rate
  DecaySeries raw = decay_run_unprojected(geom, spec, zv, 80.0, 0.4, 0.1, 10.0, 0.5);
  const double raw_growth =
      (running_at(raw, 80.0) - running_at(raw, 40.0)) / running_at(raw, 40.0);
  DecayFit density_rate = decay_fit(run.times, run.le_density, 20.0, 80.0);

  r.measured = {{"LE_running_40", l40},
                {"LE_running_80", l80},
                {"relative_growth", growth},
                {"relative_growth_unprojected", raw_growth},
                {"projected_density_decay_exponent", density_rate.exponent}};
  r.pass = growth < 0.05;
  if (!r.pass)
    r.detail =
        "the derivative pieces of the LE norm collect the outgoing flux at the structural "
        "rate t^-(1+alpha), so the [40,80] octave necessarily carries ~2^-alpha of the "
        "preceding octave's contribution; the 5% doubling tolerance would need alpha > 0.45, "
        "outside the 0 < alpha << 1 regime. Boundedness itself is visible in the projected "
        "vs unprojected contrast.";
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c8_modulation(std::uint64_t seed) {
  CriterionResult r{8, "modulation bookkeeping and d-matrix oracle", false, {}, "", 0.0};
  const auto t0 = clock_type::now();
  RadialGrid grid(60.0, 2401);
  GeometryBundle geom = make_geometry(grid);
  SpectrumReport spec = sector_spectrum(assemble(0, geom), geom);
  ZVectors zv = make_zvectors(geom, spec, 8.0);

  // antisymmetry on random first-order vectors
  std::mt19937_64 rng(seed);
  double asym = 0.0;
  for (int k = 0; k < 5; ++k) {
    FirstOrderVector u{0, random_bumps(grid, rng, 2, 10.0), random_bumps(grid, rng, 2, 10.0)};
    FirstOrderVector v{0, random_bumps(grid, rng, 2, 10.0), random_bumps(grid, rng, 2, 10.0)};
    const double ouu = pair(grid, u, u);
    const double ouv = pair(grid, u, v), ovu = pair(grid, v, u);
    asym = std::max({asym, std::abs(ouu), std::abs(ouv + ovu)});
  }
  const double znorm = std::abs(pair(grid, zv.z_plus, zv.z_minus) - 1.0);

  // two-route pairing identity: Omega(Z1, Z4) against direct quadrature
  const double o14 = pair(grid, zv.z_kernel, zv.z_gkernel);
  double direct = 0.0;
  {
    std::vector<double> f(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i)
      f[i] = -zv.chi[i] * zv.chi[i] * geom.modes.nu0[i] * geom.modes.nu0[i] *
             geom.metric.weight[i];
    double s = 0.5 * (f.front() + f.back());
    for (int i = 1; i + 1 < grid.n_points; ++i) s += f[i];
    direct = s * grid.h;
  }
  const double two_route = std::abs(o14 - direct);

  // d-matrix diagonality and improper-integral oracle via the exact tail
  const double limit = kernel_mass_limit();
  bool monotone = true, diag_ok = true;
  double worst_oracle = 0.0;
  double prev = 0.0;
  for (double rc : {8.0, 16.0, 32.0}) {
    DMatrix dm = d_matrix(rc);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j && dm.d[i][j] != 0.0) diag_ok = false;
    const double mass = -dm.d[0][0];
    if (mass <= prev) monotone = false;
    prev = mass;
    worst_oracle = std::max(worst_oracle, std::abs(mass + kernel_mass_tail(rc) - limit));
  }
  r.measured = {{"antisymmetry_defect", asym},
                {"zplus_zminus_normalization_defect", znorm},
                {"two_route_pairing_diff", two_route},
                {"d_matrix_oracle_defect", worst_oracle},
                {"kernel_mass_limit", limit},
                {"d_diagonal", diag_ok ? 1.0 : 0.0},
                {"d_monotone", monotone ? 1.0 : 0.0}};
  r.pass = asym < 1e-10 && znorm < 1e-12 && two_route < 1e-12 && worst_oracle < 1e-6 &&
           diag_ok && monotone;
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c9_shooting(std::uint64_t seed) {
  CriterionResult r{9, "shooting: oracle match, trapped envelope, drift bound", false, {}, "",
                    0.0};
  const auto t0 = clock_type::now();
  RadialGrid grid(62.0, 2481);
  GeometryBundle geom = make_geometry(grid);
  SpectrumReport spec = sector_spectrum(assemble(0, geom), geom);
  ZVectors zv = make_zvectors(geom, spec, 8.0);
  const double dt = 0.4 * grid.h / std::sqrt(2.0);
  DirectionClassification cls = classify_directions(geom, spec, zv, dt);

  std::mt19937_64 rng(seed + 9);
  double worst_rel = 0.0;
  long band = 0, band_ok = 0;
  bool trapped_ok = false;
  double envelope_ok = 1.0;

  for (int fam_i = 0; fam_i < 5; ++fam_i) {
    DataFamily fam = make_family(geom, spec, zv, cls, random_bumps(grid, rng, 2, 6.0),
                                 random_bumps(grid, rng, 2, 6.0));
    AnalyticB0 an = analytic_b0(geom, spec, cls, fam);
    if (an.degenerate) continue;

    ShootConfig cfg;
    cfg.t_final = 40.0;
    cfg.dt_safety = 0.4;
    cfg.bracket_lo = an.b0 - 0.75;
    cfg.bracket_hi = an.b0 + 0.75;
    cfg.tol = (fam_i == 0) ? 0.0 : 1e-6;  // family 0 runs to trapping
    ShootingOutcome out = shoot(geom, spec, zv, cls, fam, cfg);
    band += out.band_samples;
    band_ok += out.band_samples_ok;
    const double rel = std::abs(out.b0_star - an.b0) / std::max(std::abs(an.b0), 1e-3);
    worst_rel = std::max(worst_rel, rel);
    if (fam_i == 0) {
      trapped_ok = out.found_trapped;
      // recorded trapped series must respect the envelope throughout
      for (size_t i = 0; i < out.trapped_times.size(); ++i) {
        const double env =
            out.lambda0 * std::pow(1.0 + out.trapped_times[i] * out.trapped_times[i], -1.5);
        if (std::abs(out.trapped_aplus[i]) > env) envelope_ok = 0.0;
      }
    }
  }
  const double band_frac = band > 0 ? double(band_ok) / double(band) : 0.0;
  r.measured = {{"worst_oracle_rel_diff", worst_rel},
                {"trapped_to_t_final", trapped_ok ? 1.0 : 0.0},
                {"trapped_envelope_held", envelope_ok},
                {"band_fraction", band_frac},
                {"band_samples", double(band)}};
  r.pass = worst_rel < 1e-4 && trapped_ok && envelope_ok == 1.0 && band_frac >= 0.95 &&
           band > 50;
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c10_tails() {
  CriterionResult r{10, "late-time tails: dichotomy, Huygens, grid-vs-oracle", false, {}, "",
                    0.0};
  const auto t0 = clock_type::now();

  DichotomyResult d33 = dichotomy_experiment(3, 3.0, 1.0);
  DichotomyResult d425 = dichotomy_experiment(4, 2.5, 1.0);

  TailSource bump;
  bump.kind = TailSource::Kind::bump;
  bump.r_support = 2.0;
  bump.t_support = 1.0;
  const double oracle_silence = std::abs(dalembert(bump, 30.0, 1.0));

  CrossValidation cv_coarse = cross_validate(bump, 1.0, 30.6, 0.1);
  CrossValidation cv_fine = cross_validate(bump, 1.0, 30.6, 0.05);
  const double order_ratio = cv_coarse.max_discrepancy / cv_fine.max_discrepancy;

  double grid_silence = 0.0, peak = 0.0;
  for (size_t i = 0; i < cv_coarse.times.size(); ++i) {
    peak = std::max(peak, std::abs(cv_coarse.grid_values[i]));
    if (std::abs(cv_coarse.times[i] - 30.0) < 1e-9)
      grid_silence = std::abs(cv_coarse.grid_values[i]);
  }
  const double silence_floor = 10.0 * 0.1 * 0.1 * peak;

  r.measured = {{"exponent_a3_b3", d33.exponent},
                {"exponent_a4_b2.5", d425.exponent},
                {"oracle_huygens_value", oracle_silence},
                {"grid_huygens_value", grid_silence},
                {"grid_huygens_floor", silence_floor},
                {"grid_oracle_order_ratio", order_ratio},
                {"grid_oracle_disc_fine", cv_fine.max_discrepancy}};
  r.pass = std::abs(d33.exponent + 2.0) <= 0.15 && std::abs(d425.exponent + 2.5) <= 0.15 &&
           oracle_silence < 1e-12 && grid_silence <= silence_floor && order_ratio >= 3.0;
  r.runtime_s = seconds_since(t0);
  return r;
}

CriterionResult c11_rp_hierarchy() {
  CriterionResult r{11, "r^p hierarchy: dyadic decay of E^1 against E^2(0)", false, {}, "", 0.0};
  const auto t0 = clock_type::now();
  RadialGrid grid(125.0, 5001);
  GeometryBundle geom = make_geometry(grid);
  SpectrumReport spec = sector_spectrum(assemble(0, geom), geom);
  ZVectors zv = make_zvectors(geom, spec, 8.0);
  DecaySeries run = decay_run(geom, spec, zv, 80.0, 0.4, 0.1, 10.0, 0.25);

  const double e2_start = run.e2.front() > 0.0 ? run.e2.front() : run.e2[1];
  std::vector<double> dy_t, dy_e1;
  for (double tau : {5.0, 10.0, 20.0, 40.0}) {
    double best = 1e300, at = tau;
    for (size_t i = 0; i < run.times.size(); ++i) {
      if (run.times[i] < tau || run.times[i] >= 2.0 * tau) continue;
      if (run.e1[i] < best) {
        best = run.e1[i];
        at = run.times[i];
      }
    }
    dy_t.push_back(at);
    dy_e1.push_back(best);
  }
  DecayFit fit = decay_fit(dy_t, dy_e1, 0.0, 1e9);
  double cbound = 0.0;
  for (size_t m = 0; m < dy_t.size(); ++m)
    cbound = std::max(cbound, dy_e1[m] * dy_t[m] / e2_start);
  r.measured = {{"dyadic_e1_exponent", fit.exponent},
                {"pigeonhole_constant", cbound},
                {"e2_start", e2_start}};
  r.pass = fit.exponent <= -0.8;
  r.runtime_s = seconds_since(t0);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& selection,
                                            std::uint64_t seed) {
  auto want = [&](int id) {
    return selection.empty() ||
           std::find(selection.begin(), selection.end(), id) != selection.end();
  };
  std::vector<CriterionResult> out;
  if (want(1)) out.push_back(c1_geometry());
  if (want(2)) out.push_back(c2_kernels());
  if (want(3)) out.push_back(c3_spectrum());
  if (want(4)) out.push_back(c4_darboux(seed));
  if (want(5)) out.push_back(c5_evolution());
  if (want(6)) out.push_back(c6_growth());
  if (want(7)) out.push_back(c7_iled());
  if (want(8)) out.push_back(c8_modulation(seed));
  if (want(9)) out.push_back(c9_shooting(seed));
  if (want(10)) out.push_back(c10_tails());
  if (want(11)) out.push_back(c11_rp_hierarchy());
  return out;
}

// ---------------------------------------------------------------------------
// CLI experiment drivers

namespace {

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

SourceSpec to_source_spec(const SourceConfig& sc, const RadialGrid& grid) {
  SourceSpec s;
  s.kind = SourceSpec::Kind::separable;
  s.sector = sc.sector;
  s.radial_profile.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double rho = grid.node(i);
    if (sc.radial_type == "inv_pow") {
      s.radial_profile[i] = std::pow(1.0 + rho * rho, -0.5 * sc.a);
    } else if (sc.radial_type == "bump") {
      const double u = std::abs(rho) / sc.r_support;
      s.radial_profile[i] = u < 1.0 ? 64.0 * std::pow(u * (1.0 - u), 3.0) : 0.0;
    } else {
      throw ConfigError("unknown radial_type " + sc.radial_type);
    }
  }
  s.cutoff_rho0 = sc.r0;
  if (sc.time_type == "one")
    s.time_kind = SourceSpec::TimeProfile::one;
  else if (sc.time_type == "inv_pow")
    s.time_kind = SourceSpec::TimeProfile::inv_pow;
  else if (sc.time_type == "bump")
    s.time_kind = SourceSpec::TimeProfile::bump;
  else
    throw ConfigError("unknown time_type " + sc.time_type);
  s.exponent = sc.b;
  s.t0 = sc.t0;
  s.width = sc.t_width;
  return s;
}

}  // namespace

std::string run_profile(const ExperimentConfig& cfg) {
  RadialGrid grid(cfg.rho_max, cfg.n_points);
  GeometryBundle geom = make_geometry(grid);
  const std::string path = out_path(cfg, "profile.csv");
  std::ofstream out(path);
  out << "rho,f,z,weight,flux,V,nu0,phi_odd,phi_even\n";
  for (int i = 0; i < grid.n_points; ++i) {
    out << format_double(grid.node(i)) << ',' << format_double(geom.profile.f_values[i]) << ','
        << format_double(geom.profile.z_values[i]) << ','
        << format_double(geom.metric.weight[i]) << ',' << format_double(geom.metric.flux[i])
        << ',' << format_double(geom.pot.values[i]) << ',' << format_double(geom.modes.nu0[i])
        << ',' << format_double(geom.modes.phi_odd[i]) << ','
        << format_double(geom.modes.phi_even[i]) << '\n';
  }
  return path;
}

std::string run_spectrum(const ExperimentConfig& cfg, int ell) {
  RadialGrid grid(cfg.rho_max, cfg.n_points);
  GeometryBundle geom = make_geometry(grid);
  SpectrumReport rep = sector_spectrum(assemble(ell, geom), geom);
  nlohmann::json j;
  j["ell"] = ell;
  j["eigenvalues"] = rep.eigenvalues;
  if (rep.mu2) {
    j["mu2"] = *rep.mu2;
    j["mu2_shooting"] = rep.mu2_shooting.value_or(0.0);
  }
  j["positive_count"] = rep.positive_count;
  if (rep.kernel_shadow) j["kernel_shadow"] = *rep.kernel_shadow;
  j["residuals"] = {{"H1_nu0", rep.kernel_residual_h1_nu0},
                    {"H0_phi_odd", rep.kernel_residual_h0_phi_odd},
                    {"H0_phi_even", rep.kernel_residual_h0_phi_even}};
  return j.dump(2) + "\n";
}

std::string run_darboux_check(const ExperimentConfig& cfg) {
  RadialGrid grid(cfg.rho_max, cfg.n_points);
  GeometryBundle geom = make_geometry(grid);
  DarbouxContext ctx = make_darboux_context(geom);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> pos(-10.0, 10.0), wid(0.5, 2.0);
  std::vector<std::vector<double>> samples;
  for (int k = 0; k < 10; ++k) samples.push_back(gaussian_bump(grid, 1.0, pos(rng), wid(rng)));
  const double defect = factorization_defect(ctx, geom, samples);
  TransformedOperatorReport rep = transformed_operator(ctx);

  double datum = 0.0;
  const std::vector<double>& phi = samples.front();
  for (int i = 0; i < grid.n_points; ++i)
    datum += phi[i] * cutoff_bump(grid.node(i), cfg.r_ctf) * geom.modes.nu0[i] *
             geom.metric.weight[i] * grid.h;
  std::vector<double> back = darboux_invert(
      ctx, to_transformed_normalization(ctx, darboux_apply(ctx, phi, 1)), datum, cfg.r_ctf);
  double err = 0.0, scale = 0.0;
  for (int i = 2; i + 2 < grid.n_points; ++i) {
    err = std::max(err, std::abs(back[i] - phi[i]));
    scale = std::max(scale, std::abs(phi[i]));
  }

  nlohmann::json j;
  j["factorization_defect"] = defect;
  j["l2_eigencount"] = rep.eigencount_above_tol;
  j["vtilde_decay_constant"] = rep.vtilde_decay_constant;
  j["roundtrip_error"] = err / scale;
  j["symmetry_defect"] = rep.symmetry_defect;
  return j.dump(2) + "\n";
}

EvolveProducts run_evolve(const ExperimentConfig& cfg, bool track_modulation) {
  RadialGrid grid(cfg.rho_max, cfg.n_points);
  GeometryBundle geom = make_geometry(grid);
  const double dt = cfg.dt_safety * grid.h / std::sqrt(2.0);
  const int n = grid.n_points;

  std::map<int, Leapfrog<double>> lf;
  std::map<int, SourceSpec> sources;
  for (int ell : cfg.sectors)
    lf.emplace(ell,
               Leapfrog<double>(catenoid_background<double>(geom, ell), dt, cfg.dt_safety + 0.01));
  for (const auto& sc : cfg.sources)
    if (lf.count(sc.sector)) sources.emplace(sc.sector, to_source_spec(sc, grid));

  for (int ell : cfg.sectors) {
    std::vector<double> psi0(n, 0.0), v0(n, 0.0);
    for (const auto& d : cfg.data) {
      if (d.sector != ell) continue;
      for (int i = 0; i < n; ++i) {
        const double s = (grid.node(i) - d.center) / d.width;
        psi0[i] += d.amplitude * std::exp(-s * s);
        v0[i] += d.velocity_amplitude * std::exp(-s * s);
      }
    }
    psi0.front() = psi0.back() = 0.0;
    const SourceSpec* src = sources.count(ell) ? &sources.at(ell) : nullptr;
    lf.at(ell).set_data(psi0, v0, 0.0, src);
  }

  std::optional<SpectrumReport> spec;
  std::optional<ZVectors> zv;
  if (track_modulation) {
    spec = sector_spectrum(assemble(0, geom), geom);
    zv = make_zvectors(geom, *spec, cfg.r_ctf);
  }

  EvolveProducts products;
  products.norms_csv = out_path(cfg, "norms.csv");
  products.probes_csv = out_path(cfg, "probes.csv");
  std::ofstream norms(products.norms_csv), probes(products.probes_csv);
  std::ofstream mod;
  norms << "time,energy,conserved_energy,le_density,le_running,le_star_source,rp_e0,rp_e1,rp_e2,rp_b1,rp_b2\n";
  probes << "time,sector,rho,psi\n";
  if (track_modulation) {
    products.modulation_csv = out_path(cfg, "modulation.csv");
    mod.open(products.modulation_csv);
    mod << "time,a_plus,a_minus,omega1,omega2,omega3,omega4,omega5,omega6\n";
  }

  const long n_steps = std::lround(cfg.t_final / dt);
  const long measure_every = std::max(1L, n_steps / 400);
  double le_running = 0.0, last_density = -1.0, last_t = 0.0;

  for (long s = 0; s <= n_steps; ++s) {
    const bool measure = (s % measure_every == 0) || s == n_steps;
    double energy = 0.0, cons = 0.0, density = 0.0, lestar = 0.0, e0 = 0.0, e1 = 0.0, e2 = 0.0;
    double b1 = 0.0, b2 = 0.0;
    double t_now = 0.0;
    std::optional<FirstOrderVector> fo0, fo1;
    for (int ell : cfg.sectors) {
      const SourceSpec* src = sources.count(ell) ? &sources.at(ell) : nullptr;
      auto cb = [&](double t, const std::vector<double>& psi, const std::vector<double>& vel) {
        t_now = t;
        energy += energy_sector(geom, ell, psi, vel, false);
        cons += conserved_energy_sector(geom, ell, psi, vel);
        density += le_density_sector(geom, ell, psi, vel, cfg.alpha);
        e0 += rp_energy_sector(geom, ell, psi, vel, 0.0, cfg.rp_cutoff);
        e1 += rp_energy_sector(geom, ell, psi, vel, 1.0, cfg.rp_cutoff);
        e2 += rp_energy_sector(geom, ell, psi, vel, 2.0, cfg.rp_cutoff);
        b1 += rp_bulk_sector(geom, ell, psi, vel, 1.0, cfg.rp_cutoff);
        b2 += rp_bulk_sector(geom, ell, psi, vel, 2.0, cfg.rp_cutoff);
        if (src) {
          std::vector<double> f(n);
          const double tv = src->time_value(t);
          for (int i = 0; i < n; ++i) f[i] = tv * src->radial_profile[i];
          lestar += le_star_sector(geom, f, cfg.alpha);
        }
        for (double rp : cfg.probes) {
          const int idx = grid.center() + static_cast<int>(std::round(rp / grid.h));
          if (idx >= 0 && idx < n)
            probes << format_double(t) << ',' << ell << ',' << format_double(grid.node(idx))
                   << ',' << format_double(psi[idx]) << '\n';
        }
        if (track_modulation && ell == 0) fo0 = make_first_order(geom, 0, psi, vel);
        if (track_modulation && ell == 1) fo1 = make_first_order(geom, 1, psi, vel);
      };
      if (measure)
        lf.at(ell).step(src, cb);
      else
        lf.at(ell).step(src);
    }
    if (measure) {
      if (last_density >= 0.0) le_running += 0.5 * (density + last_density) * (t_now - last_t);
      last_density = density;
      last_t = t_now;
      norms << format_double(t_now) << ',' << format_double(energy) << ','
            << format_double(cons) << ',' << format_double(density) << ','
            << format_double(le_running) << ',' << format_double(lestar) << ','
            << format_double(e0) << ',' << format_double(e1) << ',' << format_double(e2)
            << ',' << format_double(b1) << ',' << format_double(b2) << '\n';
      if (track_modulation && fo0 && fo1) {
        ModulationRecord rec = modulation_record(geom, *zv, *fo0, *fo1, t_now);
        mod << format_double(rec.time) << ',' << format_double(rec.a_plus) << ','
            << format_double(rec.a_minus);
        for (double o : rec.omega) mod << ',' << format_double(o);
        mod << '\n';
      }
    }
  }
  return products;
}

ShootProducts run_shoot(const ExperimentConfig& cfg) {
  RadialGrid grid(cfg.rho_max, cfg.n_points);
  GeometryBundle geom = make_geometry(grid);
  SpectrumReport spec = sector_spectrum(assemble(0, geom), geom);
  ZVectors zv = make_zvectors(geom, spec, cfg.r_ctf);
  const double dt = cfg.dt_safety * grid.h / std::sqrt(2.0);
  DirectionClassification cls = classify_directions(geom, spec, zv, dt);

  const int n = grid.n_points;
  std::vector<double> base_psi(n, 0.0), base_v(n, 0.0);
  if (cfg.data.empty()) {
    base_psi = gaussian_bump(grid, 0.5, 2.0, 1.5);
  } else {
    for (const auto& d : cfg.data) {
      if (d.sector != 0) continue;
      for (int i = 0; i < n; ++i) {
        const double s = (grid.node(i) - d.center) / d.width;
        base_psi[i] += d.amplitude * std::exp(-s * s);
        base_v[i] += d.velocity_amplitude * std::exp(-s * s);
      }
    }
  }
  base_psi.front() = base_psi.back() = 0.0;
  base_v.front() = base_v.back() = 0.0;

  DataFamily fam = make_family(geom, spec, zv, cls, base_psi, base_v);
  AnalyticB0 an = analytic_b0(geom, spec, cls, fam);

  ShootConfig scfg;
  scfg.t_final = cfg.shoot_t_final;
  scfg.dt_safety = cfg.dt_safety;
  scfg.envelope_factor = cfg.envelope_factor;
  scfg.bracket_lo = cfg.bracket_lo;
  scfg.bracket_hi = cfg.bracket_hi;
  scfg.tol = cfg.shoot_tol;
  ShootingOutcome out = shoot(geom, spec, zv, cls, fam, scfg);

  ShootProducts products;
  products.trapped_csv = out_path(cfg, "trapped_series.csv");
  {
    std::ofstream ts(products.trapped_csv);
    ts << "tau,a_plus,envelope\n";
    for (size_t i = 0; i < out.trapped_times.size(); ++i) {
      const double env =
          out.lambda0 * std::pow(1.0 + out.trapped_times[i] * out.trapped_times[i], -1.5);
      ts << format_double(out.trapped_times[i]) << ',' << format_double(out.trapped_aplus[i])
         << ',' << format_double(env) << '\n';
    }
  }
  nlohmann::json j;
  j["b0_star"] = out.b0_star;
  j["analytic_b0"] = an.degenerate ? nlohmann::json() : nlohmann::json(an.b0);
  j["iterations"] = out.iterations;
  j["found_trapped"] = out.found_trapped;
  j["lambda0"] = out.lambda0;
  j["growing_is_zplus"] = cls.growing_is_zplus;
  j["rate_growing"] = cls.rate_growing;
  j["rate_decaying"] = cls.rate_decaying;
  j["trapped_series_path"] = products.trapped_csv;
  products.shooting_json = j.dump(2) + "\n";
  return products;
}

std::string run_tails(const ExperimentConfig& cfg) {
  const std::string path = out_path(cfg, "tails.csv");
  std::ofstream out(path);
  out << "t,r_probe,u\n";
  nlohmann::json summary = nlohmann::json::array();
  for (double rp : cfg.tail_probes) {
    DichotomyResult d = dichotomy_experiment(cfg.tails_a, cfg.tails_b, rp);
    for (size_t i = 0; i < d.times.size(); ++i)
      out << format_double(d.times[i]) << ',' << format_double(rp) << ','
          << format_double(d.values[i]) << '\n';
    summary.push_back({{"r_probe", rp},
                       {"exponent", d.exponent},
                       {"stderr", d.stderr_exponent},
                       {"a", cfg.tails_a},
                       {"b", cfg.tails_b}});
  }
  out << "# " << summary.dump() << "\n";
  return path;
}

void write_report_json(const std::vector<CriterionResult>& results, const std::string& path) {
  nlohmann::json j;
  j["criteria"] = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    nlohmann::json c;
    c["id"] = r.id;
    c["name"] = r.name;
    c["pass"] = r.pass;
    c["runtime_s"] = r.runtime_s;
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [k, v] : r.measured) m[k] = v;
    c["measured"] = m;
    if (!r.detail.empty()) c["detail"] = r.detail;
    j["criteria"].push_back(c);
    all = all && r.pass;
  }
  j["all_pass"] = all;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace catenoid
