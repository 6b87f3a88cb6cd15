// Acceptance battery: eleven end-to-end checks with quantitative gates and
// per-check wall-clock budgets. Each check prints one [PASS]/[FAIL] line with
// the measured values; the process exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <critnls/dynamics.hpp>
#include <critnls/experiments.hpp>
#include <critnls/fitting.hpp>
#include <critnls/lp.hpp>
#include <critnls/norms.hpp>
#include <critnls/random_fields.hpp>
#include <critnls/report_io.hpp>
#include <critnls/spectral.hpp>

using namespace critnls;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Field tensor_gaussian_a(const Grid& g, double a) {
  const auto& xs = g.axis_coords();
  const int M = g.points_per_axis();
  Field f(g, Rep::physical);
  for (std::size_t idx = 0; idx < f.v.size(); ++idx) {
    double r2 = 0;
    std::size_t rem = idx;
    for (int d = 0; d < g.dim(); ++d) {
      r2 += xs[rem % M] * xs[rem % M];
      rem /= M;
    }
    f.v[idx] = std::exp(-M_PI * a * r2);
  }
  return f;
}

cplx evolved_gaussian(double a, double t, double r2, int n) {
  const cplx den(1.0, 4.0 * M_PI * a * t);
  return std::pow(den, -0.5 * n) * std::exp(-M_PI * a * r2 / den);
}

double rel_l2(const Field& got, const Field& want) {
  Field d = got - want;
  return l2_norm(d) / l2_norm(want);
}

double geo_mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += std::log(x);
  return std::exp(s / double(v.size()));
}

// ---------------------------------------------------------------------------
// 1. propagator exactness against the closed-form gaussian evolution
// ---------------------------------------------------------------------------
Outcome c01_propagator() {
  Outcome o;
  std::ostringstream d;
  {
    const Grid g = Grid::tensor(3, 64, 16.0);
    const double a = 0.5, t = 0.2;
    const Field u0 = tensor_gaussian_a(g, a);
    const Field got = fourier_inverse(propagate(fourier_forward(u0), t));
    Field want(g, Rep::physical);
    const auto& xs = g.axis_coords();
    for (std::size_t idx = 0; idx < want.v.size(); ++idx) {
      double r2 = 0;
      std::size_t rem = idx;
      for (int dd = 0; dd < 3; ++dd) {
        r2 += xs[rem % 64] * xs[rem % 64];
        rem /= 64;
      }
      want.v[idx] = evolved_gaussian(a, t, r2, 3);
    }
    const double rel = rel_l2(got, want);
    o.pass = o.pass && rel <= 1e-6;
    d << "tensor64^3 rel " << fmt(rel);
  }
  {
    const Grid g = Grid::radial(7, 512, 1.0 / 16, 8.0, 512, 1.0 / 32, 4.0);
    const double t = 0.2;
    Field u0hat(g, Rep::frequency);
    const auto& rho = g.freq_nodes();
    for (std::size_t k = 0; k < u0hat.v.size(); ++k)
      u0hat.v[k] = std::exp(-M_PI * rho[k] * rho[k]);
    const Field got = fourier_inverse(propagate(u0hat, t));
    Field want(g, Rep::physical);
    const auto& rs = g.radial_nodes();
    for (std::size_t k = 0; k < want.v.size(); ++k)
      want.v[k] = evolved_gaussian(1.0, t, rs[k] * rs[k], 7);
    const double rel = rel_l2(got, want);
    o.pass = o.pass && rel <= 1e-6;
    d << ", radial512 n=7 rel " << fmt(rel);
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 2. dispersive sup-norm decay exponent -n/2 over t in [1, 100]
// ---------------------------------------------------------------------------
Outcome c02_dispersive() {
  Outcome o;
  std::ostringstream d;
  bool first = true;
  for (int n : {3, 7}) {
    const Grid g = Grid::radial_octaves(n, 48, -6, 4, -5, 3);
    Field u0(g, Rep::physical);
    const auto& rs = g.radial_nodes();
    for (std::size_t k = 0; k < u0.v.size(); ++k)
      u0.v[k] = std::exp(-M_PI * rs[k] * rs[k]);
    std::vector<double> ts, sups;
    for (int i = 0; i <= 12; ++i) {
      const double t = std::pow(10.0, 2.0 * i / 12.0);
      const Field ut = propagate_kernel(u0, t, g);
      double sup = 0;
      for (const cplx& z : ut.v) sup = std::max(sup, std::abs(z));
      ts.push_back(t);
      sups.push_back(sup);
    }
    const FitResult fit = loglog_fit(ts, sups);
    const double target = -0.5 * n;
    const bool ok = std::abs(fit.slope - target) <= 0.05 * std::abs(target);
    o.pass = o.pass && ok;
    d << (first ? "" : ", ") << "n=" << n << " slope " << fmt(fit.slope)
      << " (target " << fmt(target) << ")";
    first = false;
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 3. dyadic calculus: reconstruction, band separation, Bernstein uniformity
// ---------------------------------------------------------------------------
Outcome c03_lp() {
  Outcome o;
  std::ostringstream d;

  // ladder reconstruction and separated products on both grid families
  double worst_rec = 0, worst_sep = 0;
  {
    const Grid g = Grid::tensor(3, 64, 16.0);
    Rng rng(11);
    const Field fhat = fourier_forward(random_h1_field(g, -2, 2, rng));
    const DyadicLadder lad =
        build_ladder(fhat, g.default_kmin(), g.default_kmax());
    worst_rec = std::max(worst_rec, lad.reconstruction_error);
    Field rec = lad.residual_low;
    for (const auto& [k, band] : lad.bands) rec = rec + band;
    worst_rec = std::max(worst_rec, rel_l2(rec, fhat));
    const Field p8 = lp_project(fhat, 8.0, LpKind::band);
    const Field p18 = lp_project(p8, 1.0, LpKind::band);
    worst_sep = std::max(worst_sep, l2_norm(p18) / l2_norm(fhat));
  }
  const Grid gb = Grid::radial_octaves(3, 128, -12, 6, -6, 8);
  {
    Rng rng(12);
    Field fhat = random_band_field(gb, 0.5, rng);
    fhat += random_band_field(gb, 2.0, rng);
    const DyadicLadder lad =
        build_ladder(fhat, gb.default_kmin(), gb.default_kmax());
    worst_rec = std::max(worst_rec, lad.reconstruction_error);
    Field rec = lad.residual_low;
    for (const auto& [k, band] : lad.bands) rec = rec + band;
    worst_rec = std::max(worst_rec, rel_l2(rec, fhat));
    const Field q = lp_project(lp_project(fhat, 8.0, LpKind::band), 1.0,
                               LpKind::band);
    worst_sep = std::max(worst_sep, l2_norm(q) / l2_norm(fhat));
  }
  o.pass = o.pass && worst_rec <= 1e-8 && worst_sep <= 1e-12;
  d << "reconstruction " << fmt(worst_rec) << ", separation " << fmt(worst_sep);

  // Bernstein constants across 9 dyadic levels x 20 seeds
  std::vector<double> mean_linf, mean_grad;
  for (int k = -2; k <= 6; ++k) {
    const double N = std::exp2(double(k));
    std::vector<double> ra, rb;
    for (int s = 0; s < 20; ++s) {
      Rng rng(1000 + 100 * (k + 2) + s);
      const Field band = random_band_field(gb, N, rng);
      const double l2 = l2_norm(band);
      const double linf =
          spatial_norm(band, std::numeric_limits<double>::infinity());
      const double grad = hdot_norm(band, 1.0);
      ra.push_back(linf / (std::pow(N, 1.5) * l2));
      rb.push_back(grad / (N * l2));
    }
    mean_linf.push_back(geo_mean(ra));
    mean_grad.push_back(geo_mean(rb));
  }
  const auto spread = [](const std::vector<double>& v) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    return hi / lo;
  };
  const double sa = spread(mean_linf), sb = spread(mean_grad);
  o.pass = o.pass && sa <= 4.0 && sb <= 4.0;
  d << ", Bernstein spreads " << fmt(sa) << " / " << fmt(sb)
    << " over 9 levels";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 4. Strichartz and exotic-pair campaigns at their default scale
// ---------------------------------------------------------------------------
Outcome c04_strichartz() {
  Outcome o;
  std::ostringstream d;
  const ExperimentReport rs = check_strichartz(StrichartzConfig{});
  o.pass = o.pass && rs.verdict == ExperimentReport::Verdict::pass;
  d << "strichartz " << verdict_name(rs.verdict) << " (spread "
    << fmt(rs.measurements.at("spread").get<double>()) << ", scale dev "
    << fmt(rs.measurements.at("worst_scale_dev").get<double>()) << ")";
  if (rs.verdict != ExperimentReport::Verdict::pass) d << " [" << rs.reason << "]";

  const ExperimentReport re = check_exotic_strichartz(ExoticStrichartzConfig{});
  o.pass = o.pass && re.verdict == ExperimentReport::Verdict::pass;
  d << "; exotic " << verdict_name(re.verdict);
  for (const auto& gj : re.measurements.at("geometries"))
    d << " [" << gj.at("geometry").get<std::string>() << " spread "
      << fmt(gj.at("spread").get<double>()) << "]";
  if (re.verdict != ExperimentReport::Verdict::pass) d << " [" << re.reason << "]";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 5. nonlinear product estimate and kernel decay, n in {7, 8}
// ---------------------------------------------------------------------------
Outcome c05_nonlinear() {
  Outcome o;
  std::ostringstream d;
  const ExperimentReport rep = check_nonlinear_estimate(NonlinearEstimateConfig{});
  o.pass = rep.verdict == ExperimentReport::Verdict::pass;
  d << verdict_name(rep.verdict);
  for (const auto& dj : rep.measurements.at("dims"))
    d << " [n=" << dj.at("n") << " spread " << fmt(dj.at("spread").get<double>())
      << ", slope " << fmt(dj.at("para_fit").at("slope").get<double>())
      << " <= " << fmt(dj.at("para_slope_required").get<double>()) << "]";
  if (!o.pass) d << " [" << rep.reason << "]";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 6. contraction solver vs split-step integrator on ten small-data setups
// ---------------------------------------------------------------------------
Outcome c06_agreement() {
  Outcome o;
  std::ostringstream d;
  double worst_rel = 0, worst_ratio = 0;
  for (int n : {3, 4}) {
    const Grid g = Grid::tensor(n, 32, 8.0);
    const Field gauss = gaussian_datum(g);
    const double w1 =
        norm(free_evolution(gauss, 0.0, 0.1, 17), NormKind::W()).value;
    const std::vector<double> targets = {0.02, 0.03, 0.04, 0.05, 0.06};
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double mu = (i % 2 == 0) ? 1.0 : -1.0;
      const NonlinearitySpec spec = NonlinearitySpec::power(n, mu);
      const Field u0 = cplx(targets[i] / w1, 0.0) * gauss;
      SolverConfig sc;
      const SolveResult pic = picard_solve(u0, 0.0, 0.1, spec, sc);
      const Trajectory ss =
          split_step_solve(u0, 0.0, 0.1, spec, 1.0 / 400, sc.time_points);
      Field diff = pic.u.slices.back() - ss.slices.back();
      worst_rel = std::max(worst_rel, l2_norm(diff) / l2_norm(ss.slices.back()));
      for (std::size_t k = 1; k < pic.diff_history.size(); ++k) {
        if (pic.diff_history[k - 1] <= 0 || pic.diff_history[k] <= 0) break;
        worst_ratio = std::max(worst_ratio,
                               pic.diff_history[k] / pic.diff_history[k - 1]);
      }
    }
  }
  o.pass = worst_rel <= 1e-4 && worst_ratio < 0.5;
  d << "10 configs, worst final rel-L2 " << fmt(worst_rel)
    << ", worst contraction ratio " << fmt(worst_ratio);
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 7. small-data bounds across the eta schedule
// ---------------------------------------------------------------------------
Outcome c07_small_data() {
  Outcome o;
  std::ostringstream d;
  const ExperimentReport rep = small_data_experiment(SmallDataConfig{});
  o.pass = rep.verdict == ExperimentReport::Verdict::pass;
  d << verdict_name(rep.verdict) << " (W/eta spread "
    << fmt(rep.measurements.at("spread_W").get<double>()) << ", S0/mass spread "
    << fmt(rep.measurements.at("spread_S0").get<double>()) << ")";
  if (!o.pass) d << " [" << rep.reason << "]";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 8. Lipschitz dependence of the solution map on the data
// ---------------------------------------------------------------------------
Outcome c08_lipschitz() {
  Outcome o;
  std::ostringstream d;
  const ExperimentReport rep = lipschitz_experiment(LipschitzConfig{});
  o.pass = rep.verdict == ExperimentReport::Verdict::pass;
  const auto& fit = rep.measurements.at("fit");
  d << verdict_name(rep.verdict) << " (slope "
    << fmt(fit.at("slope").get<double>()) << ", R^2 "
    << fmt(fit.at("r2").get<double>()) << ", "
    << fmt(fit.at("decades").get<double>()) << " decades)";
  if (!o.pass) d << " [" << rep.reason << "]";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 9. perturbative stability exponent, n = 3 tensor and n = 7 radial
// ---------------------------------------------------------------------------
Outcome c09_stability() {
  Outcome o;
  std::ostringstream d;
  bool first = true;
  for (int n : {3, 7}) {
    StabilityConfig cfg;
    cfg.n = n;
    if (n == 7) cfg.theta_min = 7.0 / ((n - 2.0) * (n - 2.0)) - 0.05;
    const ExperimentReport rep = stability_experiment(cfg);
    o.pass = o.pass && rep.verdict == ExperimentReport::Verdict::pass;
    d << (first ? "" : "; ") << "n=" << n << " " << verdict_name(rep.verdict);
    if (rep.measurements.contains("fit")) {
      const auto& fit = rep.measurements.at("fit");
      d << " (theta " << fmt(fit.at("slope").get<double>()) << " >= "
        << fmt(cfg.theta_min) << ", R^2 " << fmt(fit.at("r2").get<double>())
        << ", " << fmt(fit.at("decades").get<double>()) << " decades)";
    }
    if (rep.verdict != ExperimentReport::Verdict::pass)
      d << " [" << rep.reason << "]";
    first = false;
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 10. scattering tail and continuity of the wave map
// ---------------------------------------------------------------------------
Outcome c10_scattering() {
  Outcome o;
  std::ostringstream d;
  const ExperimentReport rep = scattering_experiment(ScatteringConfig{});
  o.pass = rep.verdict == ExperimentReport::Verdict::pass;
  d << verdict_name(rep.verdict) << " (tail ratio "
    << fmt(rep.measurements.at("tail_ratio").get<double>())
    << ", continuity spread "
    << fmt(rep.measurements.at("continuity_spread").get<double>()) << ")";
  if (!o.pass) d << " [" << rep.reason << "]";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 11. bit-identical reports from identical manifests
// ---------------------------------------------------------------------------
Outcome c11_determinism() {
  Outcome o;
  StrichartzConfig cfg;
  cfg.points_per_axis = 32;
  cfg.seeds = 3;
  cfg.rescales = {0, 1};
  cfg.time_points = 5;
  const std::string a = report_json(check_strichartz(cfg)).dump();
  const std::string b = report_json(check_strichartz(cfg)).dump();
  o.pass = a == b;
  std::ostringstream d;
  d << "two runs, " << a.size() << " bytes, "
    << (o.pass ? "identical" : "DIFFER");
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  struct Item {
    const char* name;
    Outcome (*fn)();
    double budget_s;
  };
  const std::vector<Item> items = {
      {"propagator-exactness", c01_propagator, 5.0},
      {"dispersive-decay", c02_dispersive, 30.0},
      {"dyadic-calculus", c03_lp, 60.0},
      {"strichartz-family", c04_strichartz, 600.0},
      {"nonlinear-estimate", c05_nonlinear, 600.0},
      {"solver-agreement", c06_agreement, 600.0},
      {"small-data-bounds", c07_small_data, 600.0},
      {"lipschitz-dependence", c08_lipschitz, 600.0},
      {"stability-exponent", c09_stability, 1800.0},
      {"scattering-tail", c10_scattering, 600.0},
      {"determinism", c11_determinism, 0.0},
  };

  int failures = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = items[i].fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::ostringstream time_note;
    time_note << fmt(secs) << " s";
    if (items[i].budget_s > 0) {
      time_note << " / " << fmt(items[i].budget_s) << " s";
      if (secs >= items[i].budget_s) {
        out.pass = false;
        out.detail += " [over time budget]";
      }
    }
    if (!out.pass) ++failures;
    std::printf("[%s] %2zu %-22s %s (%s)\n", out.pass ? "PASS" : "FAIL", i + 1,
                items[i].name, out.detail.c_str(), time_note.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(items.size()) - failures,
              items.size());
  return failures;
}
