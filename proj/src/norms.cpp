#include <critnls/norms.hpp>

#include <algorithm>
#include <cmath>

#include <critnls/bessel.hpp>
#include <critnls/lp.hpp>
#include <critnls/spectral.hpp>

namespace critnls {

bool is_admissible(const Rational& q, const Rational& r, int n) {
  if (r.is_infinite()) return false;
  const Rational lhs = Rational(2) * q.reciprocal() + Rational(n) * r.reciprocal();
  return lhs == Rational(n, 2);
}

AdmissiblePair::AdmissiblePair(Rational q_, Rational r_, int n) : q(q_), r(r_) {
  const bool q_ok = q.is_infinite() || !(q < Rational(2));
  if (!q_ok || !is_admissible(q, r, n))
    throw std::invalid_argument("admissible pair: 2/q + n/r = n/2 with q >= 2 required");
}

std::vector<AdmissiblePair> s0_pair_sample(int n) {
  std::vector<AdmissiblePair> ps;
  ps.emplace_back(Rational::infinity(), Rational(2), n);
  ps.emplace_back(Rational(2), Rational(2 * n, n - 2), n);
  ps.emplace_back(Rational(2 * (n + 2), n), Rational(2 * (n + 2), n), n);
  ps.emplace_back(Rational(n + 2), Rational(2 * n * (n + 2), n * n + 2 * n - 4), n);
  ps.emplace_back(Rational(4), Rational(2 * n, n - 1), n);
  return ps;
}

double w_time_exponent(int n) { return 2.0 * (n + 2) / (n - 2); }
double w_space_exponent(int n) { return 2.0 * n * (n + 2) / (double(n) * n + 4); }
double x_weight_exponent(int n) { return 8.0 / (n + 2); }
double x_time_exponent(int n) { return n + 2.0; }
double x_space_exponent(int n) { return 2.0 * (n + 2) / n; }
double y_time_exponent(int n) { return (n + 2.0) / 3.0; }
double y_space_exponent(int n) { return 2.0 * (n + 2) / (n + 4); }

namespace {

Field to_physical(const Field& f) {
  return f.rep == Rep::physical ? f : fourier_inverse(f);
}
Field to_frequency(const Field& f) {
  return f.rep == Rep::frequency ? f : fourier_forward(f);
}

double spatial_norm_physical(const Field& u, double r) {
  const Grid& g = u.grid;
  if (std::isinf(r)) {
    double m = 0;
    for (const auto& z : u.v) m = std::max(m, std::abs(z));
    return m;
  }
  if (!(r >= 1)) throw std::invalid_argument("spatial_norm: r must be >= 1");
  double s = 0;
  if (g.mode() == GridMode::full_tensor) {
    for (const auto& z : u.v) s += std::pow(std::abs(z), r);
    return std::pow(s * g.cell_volume(), 1.0 / r);
  }
  const auto& nodes = g.radial_nodes();
  const auto& w = g.radial_weights();
  const int n = g.dim();
  for (std::size_t j = 0; j < u.v.size(); ++j)
    s += std::pow(std::abs(u.v[j]), r) * std::pow(nodes[j], n - 1) * w[j];
  return std::pow(sphere_area(n) * s, 1.0 / r);
}

// (trapezoid of g^q dt)^{1/q}; q = inf -> max over samples.
double time_norm(const std::vector<double>& g, double dt, double q) {
  if (std::isinf(q)) {
    double m = 0;
    for (double v : g) m = std::max(m, v);
    return m;
  }
  if (!(q >= 1)) throw std::invalid_argument("time norm: q must be >= 1");
  double s = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double wt = (j == 0 || j + 1 == g.size()) ? 0.5 : 1.0;
    s += wt * std::pow(g[j], q);
  }
  return std::pow(s * dt, 1.0 / q);
}

std::vector<int> ladder_ks(const LadderRange& range) {
  if (range.k_min >= range.k_max)
    throw std::invalid_argument("ladder range: k_min must be below k_max");
  std::vector<int> ks;
  for (int k = range.k_min; k <= range.k_max; ++k) ks.push_back(k);
  return ks;
}

const char* spatial_rule_name(const Grid& g) {
  return g.mode() == GridMode::full_tensor ? "tensor-lattice" : "radial-log-quadrature";
}

}  // namespace

double spatial_norm(const Field& u, double r) {
  return spatial_norm_physical(to_physical(u), r);
}

double mixed_norm(const Trajectory& u, double q, double r) {
  if (u.slices.empty()) throw std::invalid_argument("mixed_norm: empty trajectory");
  std::vector<double> g(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) g[j] = spatial_norm(u.slices[j], r);
  return time_norm(g, u.dt(), q);
}

const char* NormKind::name() const {
  switch (tag) {
    case Tag::mixed: return "mixed";
    case Tag::hsob: return "hsob";
    case Tag::W: return "W";
    case Tag::N1: return "N1";
    case Tag::S0: return "S0";
    case Tag::S1: return "S1";
    case Tag::X: return "X";
    case Tag::Y: return "Y";
  }
  return "?";
}

LadderRange LadderRange::of(const Grid& g) {
  return {g.default_kmin(), g.default_kmax()};
}

namespace {

// Per-band, per-slice spatial norms over the ladder, slice-major so each slice
// is transformed exactly once. scal[b][p][j] = L^{r_p} norm of P_{2^{k_b}}
// slice j (of the gradient when with_gradient).
std::vector<std::vector<std::vector<double>>> band_scan(
    const Trajectory& u, const std::vector<int>& ks, const std::vector<double>& rs,
    bool with_gradient) {
  std::vector<std::vector<std::vector<double>>> scal(
      ks.size(), std::vector<std::vector<double>>(rs.size(),
                                                  std::vector<double>(u.size(), 0.0)));
  for (std::size_t j = 0; j < u.size(); ++j) {
    const Field fhat = to_frequency(u.slices[j]);
    for (std::size_t b = 0; b < ks.size(); ++b) {
      const Field banded = lp_project(fhat, std::exp2(double(ks[b])), LpKind::band);
      if (std::all_of(banded.v.begin(), banded.v.end(),
                      [](cplx z) { return z == cplx(0.0, 0.0); }))
        continue;  // band multiplier misses the data support: norms stay 0
      const Field phys =
          with_gradient ? gradient_magnitude(banded) : fourier_inverse(banded);
      for (std::size_t p = 0; p < rs.size(); ++p)
        scal[b][p][j] = spatial_norm_physical(phys, rs[p]);
    }
  }
  return scal;
}

NormReport ladder_report(const Trajectory& u, const NormKind& kind, LadderRange range) {
  NormReport rep;
  rep.kind = kind.name();
  rep.spatial_rule = spatial_rule_name(u.grid);
  rep.used_ladder = true;
  rep.k_min = range.k_min;
  rep.k_max = range.k_max;
  rep.profile_id = kBumpProfileId;
  const int n = u.grid.dim();
  const auto ks = ladder_ks(range);

  if (kind.tag == NormKind::Tag::S0 || kind.tag == NormKind::Tag::S1) {
    const auto pairs = s0_pair_sample(n);
    std::vector<double> qs, rs;
    for (const auto& pr : pairs) {
      qs.push_back(pr.q.is_infinite() ? INFINITY : pr.q.value());
      rs.push_back(pr.r.value());
      rep.pair_sample.emplace_back(qs.back(), rs.back());
    }
    const auto scal = band_scan(u, ks, rs, kind.tag == NormKind::Tag::S1);
    double sup = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      double sq = 0;
      for (std::size_t b = 0; b < ks.size(); ++b) {
        const double bn = time_norm(scal[b][p], u.dt(), qs[p]);
        sq += bn * bn;
      }
      sup = std::max(sup, std::sqrt(sq));
    }
    rep.value = sup;
    return rep;
  }

  // X / Y: one exponent pair, dyadic weight 2^{k * x_weight_exponent}
  const bool is_x = (kind.tag == NormKind::Tag::X);
  const double q = is_x ? x_time_exponent(n) : y_time_exponent(n);
  const double r = is_x ? x_space_exponent(n) : y_space_exponent(n);
  rep.q = q;
  rep.r = r;
  const auto scal = band_scan(u, ks, {r}, false);
  double sq = 0;
  for (std::size_t b = 0; b < ks.size(); ++b) {
    const double bn = time_norm(scal[b][0], u.dt(), q);
    sq += std::exp2(double(ks[b]) * x_weight_exponent(n)) * bn * bn;
  }
  rep.value = std::sqrt(sq);
  return rep;
}

}  // namespace

NormReport norm(const Trajectory& u, const NormKind& kind, LadderRange range) {
  NormReport rep;
  rep.kind = kind.name();
  rep.spatial_rule = spatial_rule_name(u.grid);
  const int n = u.grid.dim();
  switch (kind.tag) {
    case NormKind::Tag::mixed:
      rep.q = kind.q;
      rep.r = kind.r;
      rep.value = mixed_norm(u, kind.q, kind.r);
      return rep;
    case NormKind::Tag::hsob: {
      rep.s = kind.s;
      rep.time_rule = "sup-over-samples";
      double m = 0;
      for (const auto& f : u.slices) m = std::max(m, hdot_norm(f, kind.s));
      rep.value = m;
      return rep;
    }
    case NormKind::Tag::W:
    case NormKind::Tag::N1: {
      const double q = (kind.tag == NormKind::Tag::W) ? w_time_exponent(n) : 2.0;
      const double r = (kind.tag == NormKind::Tag::W) ? w_space_exponent(n)
                                                      : 2.0 * n / (n + 2);
      rep.q = q;
      rep.r = r;
      std::vector<double> g(u.size());
      for (std::size_t j = 0; j < u.size(); ++j)
        g[j] = spatial_norm_physical(gradient_magnitude(u.slices[j]), r);
      rep.value = time_norm(g, u.dt(), q);
      return rep;
    }
    case NormKind::Tag::S0:
    case NormKind::Tag::S1:
    case NormKind::Tag::X:
    case NormKind::Tag::Y:
      return ladder_report(u, kind, range);
  }
  throw std::logic_error("norm: unknown kind");
}

NormReport norm(const Trajectory& u, const NormKind& kind) {
  return norm(u, kind, LadderRange::of(u.grid));
}

double square_sum_ratio(const Trajectory& u, double q, double r, LadderRange range) {
  const auto ks = ladder_ks(range);
  std::vector<std::vector<double>> band_lr(ks.size(), std::vector<double>(u.size()));
  std::vector<double> sq_lr(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const Field fhat = to_frequency(u.slices[j]);
    Field sqsum(u.grid, Rep::physical);
    for (std::size_t b = 0; b < ks.size(); ++b) {
      const Field banded = lp_project(fhat, std::exp2(double(ks[b])), LpKind::band);
      if (std::all_of(banded.v.begin(), banded.v.end(),
                      [](cplx z) { return z == cplx(0.0, 0.0); }))
        continue;
      const Field phys = fourier_inverse(banded);
      for (std::size_t i = 0; i < sqsum.v.size(); ++i)
        sqsum.v[i] += std::norm(phys.v[i]);
      band_lr[b][j] = spatial_norm_physical(phys, r);
    }
    for (auto& z : sqsum.v) z = std::sqrt(z.real());
    sq_lr[j] = spatial_norm_physical(sqsum, r);
  }
  const double left = time_norm(sq_lr, u.dt(), q);
  double right_sq = 0;
  for (std::size_t b = 0; b < ks.size(); ++b) {
    const double bn = time_norm(band_lr[b], u.dt(), q);
    right_sq += bn * bn;
  }
  const double right = std::sqrt(right_sq);
  if (right == 0) return left == 0 ? 0.0 : INFINITY;
  return left / right;
}

}  // namespace critnls
