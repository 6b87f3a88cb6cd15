#include <critnls/dynamics.hpp>

#include <algorithm>
#include <cmath>

#include <critnls/norms.hpp>
#include <critnls/spectral.hpp>

namespace critnls {

namespace {

bool native_physical(const Grid& g) { return g.mode() == GridMode::full_tensor; }

Field to_native(Field f) {
  const bool phys = native_physical(f.grid);
  if (phys && f.rep == Rep::frequency) return fourier_inverse(f);
  if (!phys && f.rep == Rep::physical) return fourier_forward(f);
  return f;
}

Field to_freq(const Field& f) {
  return f.rep == Rep::frequency ? f : fourier_forward(f);
}

Field to_phys(const Field& f) {
  return f.rep == Rep::physical ? f : fourier_inverse(f);
}

double sup_abs(const Field& f) {
  double m = 0;
  for (const auto& z : f.v) m = std::max(m, std::abs(z));
  return m;
}

// -i * frequency transform of f(u) for a frequency-side state
Field nonlinear_rate(const Field& uhat, const NonlinearitySpec& spec) {
  Field fu = apply_nonlinearity(to_phys(uhat), spec);
  Field out = fourier_forward(fu);
  out *= cplx(0.0, -1.0);
  return out;
}

}  // namespace

Trajectory free_evolution(const Field& u0, double t0, double t1, int count) {
  Trajectory traj = Trajectory::uniform(u0.grid, t0, t1, count);
  const Field uhat = to_freq(u0);
  for (int k = 0; k < count; ++k)
    traj.slices[k] = to_native(propagate(uhat, traj.times[k] - t0));
  return traj;
}

Trajectory duhamel_integral(const Trajectory& forcing, double t0) {
  if (std::abs(forcing.t0() - t0) > 1e-12 * std::max(1.0, std::abs(t0)))
    throw std::invalid_argument("duhamel_integral: t0 does not match the forcing lattice");
  const double dt = forcing.dt();
  const cplx half_step = cplx(0.0, -0.5 * dt);
  Trajectory out = Trajectory::uniform(forcing.grid, forcing.t0(), forcing.t1(),
                                       static_cast<int>(forcing.size()));
  Field I(forcing.grid, Rep::frequency);
  Field prev_f = to_freq(forcing.slices[0]);
  out.slices[0] = to_native(I);
  for (int k = 0; k + 1 < static_cast<int>(forcing.size()); ++k) {
    Field next_f = to_freq(forcing.slices[k + 1]);
    Field stage = I + half_step * prev_f;
    I = propagate(stage, dt) + half_step * next_f;
    out.slices[k + 1] = to_native(I);
    prev_f = std::move(next_f);
  }
  return out;
}

namespace {

// sup over samples of the native-representation L^2 distance
double sup_l2_distance(const Trajectory& a, const Trajectory& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, l2_norm(a.slices[k] - b.slices[k]));
  return m;
}

Trajectory nonlinear_forcing(const Trajectory& u, const NonlinearitySpec& spec) {
  Trajectory F = Trajectory::uniform(u.grid, u.t0(), u.t1(), static_cast<int>(u.size()));
  for (std::size_t k = 0; k < u.size(); ++k) {
    Field fu = apply_nonlinearity(to_phys(u.slices[k]), spec);
    F.slices[k] = native_physical(u.grid) ? std::move(fu) : fourier_forward(fu);
  }
  return F;
}

}  // namespace

SolveResult picard_solve(const Field& u0, double t0, double t1,
                         const NonlinearitySpec& spec, const SolverConfig& config) {
  Trajectory free = free_evolution(u0, t0, t1, config.time_points);
  const double w_free = norm(free, NormKind::W()).value;
  if (w_free > config.eta)
    throw SmallnessError("picard_solve: free-evolution W norm " + std::to_string(w_free) +
                             " exceeds the smallness threshold " + std::to_string(config.eta),
                         w_free);

  SolveResult result{free, {}, 0.0, w_free, 0};
  const double scale = std::max(1.0, l2_norm(u0));
  const double sup0 = sup_abs(to_phys(u0));

  if (spec.is_linear()) {
    result.u = std::move(free);
    return result;
  }

  Trajectory traj = free;
  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    Trajectory I = duhamel_integral(nonlinear_forcing(traj, spec), t0);
    Trajectory next = free;
    for (std::size_t k = 0; k < next.size(); ++k) next.slices[k] += I.slices[k];

    const double diff = sup_l2_distance(next, traj);
    if (!std::isfinite(diff))
      throw DivergenceError("picard_solve: non-finite iterate distance at sweep " +
                                std::to_string(sweep),
                            sweep);
    for (std::size_t k = 0; k < next.size(); ++k) {
      const double amp = sup_abs(to_phys(next.slices[k]));
      if (sup0 > 0 && amp > config.amplitude_ceiling * sup0)
        throw DivergenceError("picard_solve: amplitude ceiling crossed at sample " +
                                  std::to_string(k),
                              sweep);
    }
    result.diff_history.push_back(diff);
    traj = std::move(next);
    result.sweeps = sweep + 1;
    if (diff < config.contraction_tol * scale) break;
  }
  if (result.diff_history.empty() ||
      result.diff_history.back() >= config.contraction_tol * scale)
    throw SmallnessError(
        "picard_solve: no contraction within " + std::to_string(config.max_sweeps) +
            " sweeps (free W norm " + std::to_string(w_free) + ")",
        w_free);

  // integral-equation defect of the returned trajectory, same metric
  Trajectory I = duhamel_integral(nonlinear_forcing(traj, spec), t0);
  Trajectory rhs = free;
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs.slices[k] += I.slices[k];
  result.residual = sup_l2_distance(rhs, traj);
  if (result.residual > config.residual_tol)
    throw ResidualError("picard_solve: integral-equation defect " +
                            std::to_string(result.residual) + " above tolerance",
                        result.residual);
  result.u = std::move(traj);
  return result;
}

namespace {

int steps_per_panel(double panel, double dt) {
  return std::max(1, static_cast<int>(std::ceil(panel / dt - 1e-12)));
}

void check_step_finite(const Field& f, int step) {
  for (const auto& z : f.v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw DivergenceError("integrator: non-finite sample at step " + std::to_string(step),
                            step);
}

}  // namespace

Trajectory split_step_solve(const Field& u0, double t0, double t1,
                            const NonlinearitySpec& spec, double dt, int record_count) {
  if (u0.grid.mode() != GridMode::full_tensor)
    throw std::logic_error(
        "split_step_solve: tensor grids only (the radial quadrature round trip "
        "amplifies per-step error; use lawson_solve)");
  if (!(dt > 0)) throw std::invalid_argument("split_step_solve: dt must be positive");

  Trajectory traj = Trajectory::uniform(u0.grid, t0, t1, record_count);
  Field u = to_phys(u0);
  traj.slices[0] = u;
  const double panel = traj.dt();
  const int sub = steps_per_panel(panel, dt);
  const double delta = panel / sub;
  int step = 0;
  for (int k = 0; k + 1 < record_count; ++k) {
    for (int s = 0; s < sub; ++s, ++step) {
      u = propagate(u, 0.5 * delta);
      if (!spec.is_linear() || spec.hook) {
        for (auto& z : u.v) {
          // exact phase rotation: |u| is invariant, f(u)/u is real for the
          // power law; the hook falls back to the same rotation through f
          const double a = std::abs(z);
          if (a == 0) continue;
          const cplx fz = spec.eval(z);
          const double rate = (std::conj(z) * fz).real() / (a * a);
          z *= cplx(std::cos(-rate * delta), std::sin(-rate * delta));
        }
      }
      u = propagate(u, 0.5 * delta);
      check_step_finite(u, step);
    }
    traj.slices[k + 1] = u;
  }
  return traj;
}

Trajectory lawson_solve(const Field& u0, double t0, double t1,
                        const NonlinearitySpec& spec, double dt, int record_count) {
  if (!(dt > 0)) throw std::invalid_argument("lawson_solve: dt must be positive");
  Trajectory traj = Trajectory::uniform(u0.grid, t0, t1, record_count);
  Field uhat = to_freq(u0);
  traj.slices[0] = to_native(uhat);
  const double panel = traj.dt();
  const int sub = steps_per_panel(panel, dt);
  const double delta = panel / sub;
  int step = 0;
  for (int k = 0; k + 1 < record_count; ++k) {
    for (int s = 0; s < sub; ++s, ++step) {
      if (spec.is_linear()) {
        uhat = propagate(uhat, delta);
      } else {
        const Field k1 = nonlinear_rate(uhat, spec);
        Field mid = uhat + (0.5 * delta) * k1;
        mid = propagate(mid, 0.5 * delta);
        const Field k2 = nonlinear_rate(mid, spec);
        uhat = propagate(uhat, delta) + delta * propagate(k2, 0.5 * delta);
      }
      check_step_finite(uhat, step);
    }
    traj.slices[k + 1] = to_native(uhat);
  }
  return traj;
}

Subdivision subdivide_by_norm(const Trajectory& u, double threshold) {
  if (!(threshold > 0)) throw std::invalid_argument("subdivide_by_norm: threshold > 0");
  const int n = u.grid.dim();
  const double q = 2.0 * (n + 2) / (n - 2);
  // spatial norms once per slice; every window is then a scalar trapezoid
  std::vector<double> gq(u.size());
  for (std::size_t j = 0; j < u.size(); ++j)
    gq[j] = std::pow(spatial_norm(u.slices[j], q), q);
  const double dt = u.dt();
  auto window_norm = [&](int i, int j) {
    double s = 0;
    for (int k = i; k <= j; ++k) {
      const double wt = (k == i || k == j) ? 0.5 : 1.0;
      s += wt * gq[k];
    }
    return std::pow(s * dt, 1.0 / q);
  };
  Subdivision out;
  out.total_norm = window_norm(0, static_cast<int>(u.size()) - 1);
  out.ceiling = std::pow(1.0 + out.total_norm / threshold, q);
  int i = 0;
  const int last = static_cast<int>(u.size()) - 1;
  while (i < last) {
    int j = i + 1;
    while (j < last && window_norm(i, j + 1) <= threshold) ++j;
    if (window_norm(i, j) > threshold && j == i + 1)
      throw std::runtime_error(
          "subdivide_by_norm: single-step piece exceeds the threshold; refine the "
          "time lattice");
    out.intervals.emplace_back(u.times[i], u.times[j]);
    i = j;
  }
  if (out.intervals.empty()) out.intervals.emplace_back(u.t0(), u.t1());
  return out;
}

ScatteringReport scattering_state(const Trajectory& u, double tail_tol) {
  std::vector<Field> v;
  v.reserve(u.size());
  for (std::size_t k = 0; k < u.size(); ++k)
    v.push_back(propagate(to_freq(u.slices[k]), -u.times[k]));
  std::vector<double> inc(u.size() - 1);
  for (std::size_t k = 0; k + 1 < u.size(); ++k) inc[k] = hdot_norm(v[k + 1] - v[k], 1.0);

  ScatteringReport rep{to_native(v.back()), inc, false, 0.0};
  if (inc.empty() || !(inc.front() > 0)) {
    rep.converged = true;  // nothing moved: already a free wave
    return rep;
  }
  rep.tail_ratio = inc.back() / inc.front();
  bool tail_monotone = true;
  for (std::size_t k = inc.size() - std::min<std::size_t>(inc.size(), inc.size() / 3 + 1);
       k + 1 < inc.size(); ++k)
    if (inc[k + 1] > inc[k]) tail_monotone = false;
  rep.converged = tail_monotone && rep.tail_ratio < tail_tol;
  return rep;
}

double hamiltonian(const Field& u, const NonlinearitySpec& spec) {
  const Field up = to_phys(u);
  const double grad2 = hdot_norm(up, 1.0);
  double pot = 0;
  if (!spec.is_linear() && !spec.hook) {
    const double pp2 = spec.p + 2.0;
    pot = spec.mu / pp2 * std::pow(spatial_norm(up, pp2), pp2);
  }
  return 0.5 * grad2 * grad2 + pot;
}

}  // namespace critnls
