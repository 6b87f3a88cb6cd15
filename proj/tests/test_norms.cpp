#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <critnls/dynamics.hpp>
#include <critnls/lp.hpp>
#include <critnls/norms.hpp>
#include <critnls/random_fields.hpp>
#include <critnls/rescale.hpp>
#include <critnls/spectral.hpp>

using namespace critnls;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Field tensor_gaussian(const Grid& g) {
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
    f.v[idx] = std::exp(-M_PI * r2);
  }
  return f;
}

Trajectory static_traj(const Field& f, double t0, double t1, int count) {
  Trajectory u = Trajectory::uniform(f.grid, t0, t1, count);
  for (auto& s : u.slices) s = f;
  return u;
}

Trajectory map_slices(const Trajectory& u, Field (*fn)(const Field&)) {
  std::vector<Field> out;
  out.reserve(u.size());
  for (const auto& s : u.slices) out.push_back(fn(s));
  return Trajectory(u.grid, u.times, out);
}

}  // namespace

TEST_CASE("admissible pairs: the line 2/q + n/r = n/2") {
  CHECK(is_admissible(Rational::infinity(), Rational(2), 3));
  CHECK(is_admissible(Rational(2), Rational(6), 3));
  CHECK(is_admissible(Rational(10, 3), Rational(10, 3), 3));
  CHECK_FALSE(is_admissible(Rational(4), Rational(4), 3));
  CHECK_FALSE(is_admissible(Rational(1), Rational(6), 3));  // q < 2
  CHECK_THROWS(AdmissiblePair(Rational(4), Rational(4), 3));

  const auto sample = s0_pair_sample(3);
  CHECK(sample.size() == 5);
  bool has_energy = false, has_mass = false, has_symmetric = false;
  for (const auto& p : sample) {
    CHECK(is_admissible(p.q, p.r, 3));
    if (p.q.is_infinite() && p.r == Rational(2)) has_energy = true;
    if (p.q == Rational(2) && p.r == Rational(6)) has_mass = true;
    if (p.q == Rational(10, 3) && p.r == Rational(10, 3)) has_symmetric = true;
  }
  CHECK(has_energy);
  CHECK(has_mass);
  CHECK(has_symmetric);
}

TEST_CASE("exponent helpers: closed forms by dimension") {
  CHECK(w_time_exponent(3) == doctest::Approx(10.0));
  CHECK(w_space_exponent(3) == doctest::Approx(30.0 / 13.0));
  CHECK(x_weight_exponent(3) == doctest::Approx(8.0 / 5.0));
  CHECK(x_time_exponent(3) == doctest::Approx(5.0));
  CHECK(x_space_exponent(3) == doctest::Approx(10.0 / 3.0));
  CHECK(y_time_exponent(3) == doctest::Approx(5.0 / 3.0));
  CHECK(y_space_exponent(3) == doctest::Approx(10.0 / 7.0));
  CHECK(w_time_exponent(7) == doctest::Approx(18.0 / 5.0));
  CHECK(x_weight_exponent(7) == doctest::Approx(8.0 / 9.0));
  CHECK(y_space_exponent(7) == doctest::Approx(18.0 / 11.0));
}

TEST_CASE("spatial norms: gaussian closed forms") {
  const Grid g = Grid::tensor(3, 64, 16.0);
  const Field gauss = tensor_gaussian(g);
  CHECK(spatial_norm(gauss, 2.0) == doctest::Approx(std::exp2(-0.75)).epsilon(1e-7));
  CHECK(spatial_norm(gauss, 4.0) == doctest::Approx(std::pow(4.0, -3.0 / 8.0)).epsilon(1e-7));
  CHECK(spatial_norm(gauss, kInf) == doctest::Approx(1.0).epsilon(1e-12));
  // frequency input converts internally
  CHECK(spatial_norm(fourier_forward(gauss), kInf) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("mixed norms: constants, ramps, sup-in-time") {
  const Grid g = Grid::tensor(3, 16, 8.0);
  const Field gauss = tensor_gaussian(g);
  const double l2 = spatial_norm(gauss, 2.0);

  const Trajectory c = static_traj(gauss, 0.0, 1.0, 9);
  CHECK(mixed_norm(c, 3.5, 2.0) == doctest::Approx(l2).epsilon(1e-12));
  CHECK(mixed_norm(c, kInf, 2.0) == doctest::Approx(l2).epsilon(1e-12));

  // u(t) = t g on [0, 1]: squared L2-in-time of t is 1/3 up to trapezoid error
  Trajectory ramp = Trajectory::uniform(g, 0.0, 1.0, 33);
  for (std::size_t k = 0; k < ramp.size(); ++k)
    ramp.slices[k] = cplx(ramp.times[k], 0.0) * gauss;
  CHECK(mixed_norm(ramp, 2.0, 2.0) ==
        doctest::Approx(l2 / std::sqrt(3.0)).epsilon(5e-4));
  CHECK(mixed_norm(ramp, kInf, 2.0) == doctest::Approx(l2).epsilon(1e-12));

  // interval length enters through |I|^{1/q}
  const Trajectory c2 = static_traj(gauss, 0.0, 2.0, 9);
  CHECK(mixed_norm(c2, 2.0, 2.0) ==
        doctest::Approx(std::sqrt(2.0) * l2).epsilon(1e-12));
}

TEST_CASE("W and N1: agree with their gradient mixed-norm definitions") {
  const Grid g = Grid::tensor(3, 16, 8.0);
  Rng rng(51);
  const Field u0 = random_h1_field(g, -1, 0, rng);
  const Trajectory u = free_evolution(u0, 0.0, 0.5, 9);

  const Trajectory grad = map_slices(u, gradient_magnitude);
  const double w_brute = mixed_norm(grad, w_time_exponent(3), w_space_exponent(3));
  CHECK(norm(u, NormKind::W()).value == doctest::Approx(w_brute).epsilon(1e-12));

  const double n1_brute = mixed_norm(grad, 2.0, 2.0 * 3 / (3 + 2.0));
  CHECK(norm(u, NormKind::N1()).value == doctest::Approx(n1_brute).epsilon(1e-12));

  const NormReport rep = norm(u, NormKind::W());
  CHECK(rep.kind == std::string("W"));
  CHECK(rep.spatial_rule == std::string("tensor-lattice"));
}

TEST_CASE("S0: supremum over the pair sample of the band square function") {
  const Grid g = Grid::tensor(3, 16, 8.0);
  Rng rng(52);
  const Field u0 = random_h1_field(g, -1, 0, rng);
  const Trajectory u = free_evolution(u0, 0.0, 0.5, 5);
  const LadderRange range{-3, 1};

  double brute = 0;
  for (const auto& p : s0_pair_sample(3)) {
    double sq = 0;
    for (int k = range.k_min; k <= range.k_max; ++k) {
      std::vector<Field> banded;
      banded.reserve(u.size());
      for (const auto& s : u.slices)
        banded.push_back(lp_project(s, std::exp2(double(k)), LpKind::band));
      const double m =
          mixed_norm(Trajectory(g, u.times, banded), p.q.value(), p.r.value());
      sq += m * m;
    }
    brute = std::max(brute, std::sqrt(sq));
  }
  const NormReport rep = norm(u, NormKind::S0(), range);
  CHECK(rep.value == doctest::Approx(brute).epsilon(1e-10));
  CHECK(rep.used_ladder);
  CHECK(rep.pair_sample.size() == 5);
  CHECK(rep.profile_id == std::string(kBumpProfileId));
}

TEST_CASE("X and Y: dyadically weighted square sums of exotic mixed norms") {
  const Grid g = Grid::tensor(3, 16, 8.0);
  Rng rng(53);
  const Field u0 = random_h1_field(g, -1, 0, rng);
  const Trajectory u = free_evolution(u0, 0.0, 0.5, 5);
  const LadderRange range{-3, 1};

  auto brute = [&](double qt, double qx, double wexp) {
    double sq = 0;
    for (int k = range.k_min; k <= range.k_max; ++k) {
      const double N = std::exp2(double(k));
      std::vector<Field> banded;
      banded.reserve(u.size());
      for (const auto& s : u.slices)
        banded.push_back(lp_project(s, N, LpKind::band));
      const double m = mixed_norm(Trajectory(g, u.times, banded), qt, qx);
      sq += std::pow(N, wexp) * m * m;
    }
    return std::sqrt(sq);
  };
  const double x_brute =
      brute(x_time_exponent(3), x_space_exponent(3), x_weight_exponent(3));
  const double y_brute =
      brute(y_time_exponent(3), y_space_exponent(3), x_weight_exponent(3));
  CHECK(norm(u, NormKind::X(), range).value == doctest::Approx(x_brute).epsilon(1e-10));
  CHECK(norm(u, NormKind::Y(), range).value == doctest::Approx(y_brute).epsilon(1e-10));
}

TEST_CASE("ladder norms: homogeneity and triangle inequality") {
  const Grid g = Grid::tensor(3, 16, 8.0);
  Rng rng(54);
  const Field a0 = random_h1_field(g, -1, 0, rng);
  const Field b0 = random_h1_field(g, -1, 0, rng);
  const Trajectory a = free_evolution(a0, 0.0, 0.5, 5);
  const Trajectory b = free_evolution(b0, 0.0, 0.5, 5);
  std::vector<Field> sum_slices;
  for (std::size_t k = 0; k < a.size(); ++k)
    sum_slices.push_back(a.slices[k] + b.slices[k]);
  const Trajectory sum(g, a.times, sum_slices);

  std::vector<Field> scaled;
  for (const auto& s : a.slices) scaled.push_back(cplx(2.5, 0.0) * s);
  const Trajectory a25(g, a.times, scaled);

  for (const NormKind kind : {NormKind::W(), NormKind::S0(), NormKind::S1(),
                              NormKind::X(), NormKind::Y()}) {
    CAPTURE(kind.name());
    const double na = norm(a, kind).value;
    CHECK(norm(a25, kind).value == doctest::Approx(2.5 * na).epsilon(1e-12));
    CHECK(norm(sum, kind).value <=
          na + norm(b, kind).value + 1e-12 * (na + 1.0));
  }
}

TEST_CASE("square sum ratio: bounded by one for q, r >= 2") {
  const Grid g = Grid::tensor(3, 16, 8.0);
  Rng rng(55);
  const Field u0 = random_h1_field(g, -2, 1, rng);
  const Trajectory u = free_evolution(u0, 0.0, 0.5, 5);
  const LadderRange range = LadderRange::of(g);
  const std::vector<std::pair<double, double>> pairs = {
      {2.0, 6.0}, {10.0 / 3.0, 10.0 / 3.0}, {5.0, 10.0 / 3.0}};
  for (auto [q, r] : pairs) {
    const double ratio = square_sum_ratio(u, q, r, range);
    CAPTURE(q);
    CHECK(ratio <= 1.0 + 1e-6);
    CHECK(ratio > 0.3);
  }
}

TEST_CASE("scale invariance: ladder norms under the dyadic rescaling") {
  const Grid g = Grid::tensor(3, 16, 8.0);
  Rng rng(56);
  const Field u0 = random_h1_field(g, -1, 1, rng);
  const Trajectory u = free_evolution(u0, 0.0, 0.5, 5);
  for (int j : {1, -1}) {
    const Trajectory uj = dyadic_rescale(u, j);
    CAPTURE(j);
    for (const NormKind kind :
         {NormKind::W(), NormKind::S1(), NormKind::X(), NormKind::HomSobolev(1.0)}) {
      CAPTURE(kind.name());
      const double base = norm(u, kind).value;
      CHECK(norm(uj, kind).value == doctest::Approx(base).epsilon(1e-10));
    }
  }
}

TEST_CASE("mixed-norm time refinement: trapezoid converges") {
  const Grid g = Grid::tensor(3, 16, 8.0);
  Rng rng(57);
  const Field u0 = random_h1_field(g, -1, 0, rng);
  const double coarse = norm(free_evolution(u0, 0.0, 0.5, 9), NormKind::W()).value;
  const double fine = norm(free_evolution(u0, 0.0, 0.5, 33), NormKind::W()).value;
  CHECK(std::abs(coarse - fine) / fine < 1e-3);
}
