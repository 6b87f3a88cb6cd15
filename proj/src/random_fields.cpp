#include <critnls/random_fields.hpp>

#include <cmath>

#include <critnls/lp.hpp>
#include <critnls/spectral.hpp>

namespace critnls {

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] uniforms; u = 0 excluded so log is finite.
  double u = 0;
  do {
    u = uniform();
  } while (u <= 0);
  const double v = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u));
  const double ang = 2.0 * M_PI * v;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

namespace {

double band_bump(double absxi, double N) {
  return lp_bump(absxi / N) - lp_bump(2.0 * absxi / N);
}

}  // namespace

Field random_band_field(const Grid& g, double N, Rng& rng) {
  Field f(g, Rep::frequency);
  if (g.mode() == GridMode::full_tensor) {
    const auto& fsq = g.freq_sq();
    for (std::size_t k = 0; k < f.v.size(); ++k) {
      const double w = band_bump(std::sqrt(fsq[k]), N);
      // consume the stream only inside the band so narrow bands stay cheap
      if (w > 0) f.v[k] = w * rng.cgaussian();
    }
    return f;
  }
  constexpr int kCenters = 8;
  const double lo = std::log(N / 2), hi = std::log(2 * N);
  const double sig = (hi - lo) / (kCenters - 1);
  cplx coef[kCenters];
  for (auto& c : coef) c = rng.cgaussian();
  const auto& rho = g.freq_nodes();
  for (std::size_t k = 0; k < f.v.size(); ++k) {
    const double lam = std::log(rho[k]);
    cplx prof = 0;
    for (int i = 0; i < kCenters; ++i) {
      const double c = lo + (hi - lo) * i / (kCenters - 1);
      prof += coef[i] * std::exp(-0.5 * ((lam - c) / sig) * ((lam - c) / sig));
    }
    f.v[k] = prof * band_bump(rho[k], N);
  }
  return f;
}

Field random_h1_field(const Grid& g, int k_lo, int k_hi, Rng& rng) {
  if (k_lo > k_hi) throw std::invalid_argument("random_h1_field: empty band range");
  Field acc(g, Rep::frequency);
  for (int k = k_lo; k <= k_hi; ++k)
    acc += random_band_field(g, std::exp2(double(k)), rng);
  const double h1 = hdot_norm(acc, 1.0);
  if (!(h1 > 0)) throw std::runtime_error("random_h1_field: degenerate draw");
  acc *= 1.0 / h1;
  return fourier_inverse(acc);
}

Field gaussian_datum(const Grid& g) {
  if (g.mode() == GridMode::full_tensor) {
    const auto& xs = g.axis_coords();
    const int n = g.dim();
    const int M = g.points_per_axis();
    std::vector<double> e(M);
    for (int i = 0; i < M; ++i) e[i] = std::exp(-M_PI * xs[i] * xs[i]);
    Field f(g, Rep::physical);
    for (std::size_t idx = 0; idx < f.v.size(); ++idx) {
      double val = 1.0;
      std::size_t rem = idx;
      for (int a = 0; a < n; ++a) {
        val *= e[rem % M];
        rem /= M;
      }
      f.v[idx] = val;
    }
    return f;
  }
  Field f(g, Rep::frequency);
  const auto& rho = g.freq_nodes();
  for (std::size_t k = 0; k < f.v.size(); ++k)
    f.v[k] = std::exp(-M_PI * rho[k] * rho[k]);
  return f;
}

double time_envelope(double t, double t0, double t1) {
  const double s = 2.0 * (t - t0) / (t1 - t0) - 1.0;
  return lp_bump(1.0 + std::abs(s));
}

Trajectory random_forcing(const Grid& g, double N, double t0, double t1, int count,
                          Rng& rng) {
  Field ghat = random_band_field(g, N, rng);
  Trajectory traj = Trajectory::uniform(g, t0, t1, count);
  const bool physical_out = (g.mode() == GridMode::full_tensor);
  for (int k = 0; k < count; ++k) {
    Field slice = propagate(ghat, traj.times[k]);
    slice *= time_envelope(traj.times[k], t0, t1);
    traj.slices[k] = physical_out ? fourier_inverse(slice) : std::move(slice);
  }
  return traj;
}

}  // namespace critnls
