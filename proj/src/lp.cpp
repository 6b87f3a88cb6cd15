#include <critnls/lp.hpp>

#include <cmath>

#include <critnls/spectral.hpp>

namespace critnls {

double lp_bump(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double u = s - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

namespace {

bool is_power_of_two(double N) {
  if (!(N > 0) || !std::isfinite(N)) return false;
  int e = 0;
  const double m = std::frexp(N, &e);
  return m == 0.5;
}

double band_weight(double absxi, double N, LpKind kind) {
  switch (kind) {
    case LpKind::band:
      return lp_bump(absxi / N) - lp_bump(2.0 * absxi / N);
    case LpKind::low:
      return lp_bump(absxi / N);
    case LpKind::high:
      return 1.0 - lp_bump(absxi / N);
  }
  return 0.0;
}

Field project_freq(const Field& fhat, double N, LpKind kind) {
  Field out = fhat;
  const auto& fsq = out.grid.freq_sq();
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] *= band_weight(std::sqrt(fsq[k]), N, kind);
  return out;
}

}  // namespace

Field lp_project(const Field& f, double N, LpKind kind) {
  if (!is_power_of_two(N))
    throw std::range_error("lp_project: N must be a positive power of two");
  if (N / 2.0 > f.grid.max_freq())
    throw std::range_error("lp_project: N exceeds the grid's resolvable range");
  if (f.rep == Rep::frequency) return project_freq(f, N, kind);
  return fourier_inverse(project_freq(fourier_forward(f), N, kind));
}

DyadicLadder build_ladder(const Field& f, int k_min, int k_max) {
  if (k_min >= k_max)
    throw std::invalid_argument("build_ladder: k_min must be below k_max");
  const Grid& g = f.grid;
  Field fhat = (f.rep == Rep::frequency) ? f : fourier_forward(f);

  // Band multipliers telescope: residual_low + sum_k band_k has total
  // multiplier phi(|xi| / 2^{k_max}), so the defect against f is measurable
  // per frequency sample before any synthesis.
  const auto& fsq = g.freq_sq();
  Field defect(g, Rep::frequency);
  for (std::size_t j = 0; j < fhat.v.size(); ++j)
    defect.v[j] =
        fhat.v[j] * (lp_bump(std::sqrt(fsq[j]) / std::exp2(double(k_max))) - 1.0);
  const double denom = l2_norm(fhat);
  const double err = denom > 0 ? l2_norm(defect) / denom : 0.0;
  if (err > 1e-8)
    throw LadderError("build_ladder: reconstruction defect " + std::to_string(err) +
                      " exceeds 1e-8; raise k_max above the field's content");

  const bool physical_out = (f.rep == Rep::physical);
  auto emit = [&](const Field& fr) { return physical_out ? fourier_inverse(fr) : fr; };

  Field low = project_freq(fhat, std::exp2(double(k_min - 1)), LpKind::low);
  DyadicLadder lad{g, k_min, k_max, {}, emit(low), kBumpProfileId, err};
  for (int k = k_min; k <= k_max; ++k)
    lad.bands.emplace(k, emit(project_freq(fhat, std::exp2(double(k)), LpKind::band)));
  return lad;
}

}  // namespace critnls
