#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <critnls/spectral.hpp>

using namespace critnls;

namespace {

Field radial_gaussian(const Grid& g, double a) {
  Field f(g, Rep::physical);
  const auto& r = g.radial_nodes();
  for (std::size_t j = 0; j < f.v.size(); ++j)
    f.v[j] = std::exp(-M_PI * a * r[j] * r[j]);
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

// n = 3: the inner quadrature truncation scales like r_min^3, so the spatial
// window must reach far down for 1e-6 transforms; n = 7 forgives r_min.
const Grid g3 = Grid::radial_octaves(3, 64, -10, 4, -5, 2);
const Grid g7 = Grid::radial_octaves(7, 64, -6, 4, -6, 3);

}  // namespace

TEST_CASE("radial transform: gaussian pair in n = 3 and n = 7") {
  for (const Grid& g : {g3, g7}) {
    CAPTURE(g.dim());
    const Field f = radial_gaussian(g, 1.0);
    const Field fhat = fourier_forward(f);
    Field want(g, Rep::frequency);
    const auto& rho = g.freq_nodes();
    for (std::size_t k = 0; k < want.v.size(); ++k)
      want.v[k] = std::exp(-M_PI * rho[k] * rho[k]);
    CHECK(rel_l2(fhat, want) < 1e-6);
    CHECK(rel_l2(fourier_inverse(fhat), f) < 1e-8);
    // quadrature Plancherel
    CHECK(l2_norm(fhat) == doctest::Approx(l2_norm(f)).epsilon(1e-6));
  }
}

TEST_CASE("radial norms: gaussian L2 and H1 values") {
  const Field f = radial_gaussian(g3, 1.0);
  CHECK(l2_norm(f) == doctest::Approx(std::exp2(-0.75)).epsilon(1e-6));
  CHECK(hdot_norm(fourier_forward(f), 1.0) ==
        doctest::Approx(std::sqrt(3.0 * M_PI * std::exp2(-1.5))).epsilon(1e-6));

  const Field f7 = radial_gaussian(g7, 1.0);
  CHECK(l2_norm(f7) == doctest::Approx(std::exp2(-7.0 / 4)).epsilon(1e-6));
  CHECK(hdot_norm(fourier_forward(f7), 1.0) ==
        doctest::Approx(std::sqrt(7.0 * M_PI * std::exp2(-3.5))).epsilon(1e-6));
}

TEST_CASE("radial propagator: closed-form gaussian evolution") {
  for (const Grid& g : {g3, g7}) {
    CAPTURE(g.dim());
    const double a = 1.0, t = 0.1;
    const Field u0 = radial_gaussian(g, a);
    const Field ut = fourier_inverse(propagate(fourier_forward(u0), t));
    Field want(g, Rep::physical);
    const auto& r = g.radial_nodes();
    for (std::size_t j = 0; j < want.v.size(); ++j)
      want.v[j] = evolved_gaussian(a, t, r[j] * r[j], g.dim());
    CHECK(rel_l2(ut, want) < 1e-6);
  }
}

TEST_CASE("radial propagator: frequency phase is an exact isometry") {
  const Field fhat = fourier_forward(radial_gaussian(g3, 1.0));
  CHECK(l2_norm(propagate(fhat, 3.7)) ==
        doctest::Approx(l2_norm(fhat)).epsilon(1e-14));
  CHECK(rel_l2(propagate(propagate(fhat, 1.3), -1.3), fhat) < 1e-14);
}

TEST_CASE("propagate_kernel: matches the closed form at small and large t") {
  for (double t : {0.5, 5.0}) {
    const double a = 1.0;
    const Field u0 = radial_gaussian(g3, a);
    const Field ut = propagate_kernel(u0, t, g3);
    Field want(g3, Rep::physical);
    const auto& r = g3.radial_nodes();
    for (std::size_t j = 0; j < want.v.size(); ++j)
      want.v[j] = evolved_gaussian(a, t, r[j] * r[j], 3);
    CAPTURE(t);
    CHECK(rel_l2(ut, want) < 1e-5);
  }
  // n = 7 spot check
  const Field u0 = radial_gaussian(g7, 1.0);
  const Field ut = propagate_kernel(u0, 2.0, g7);
  Field want(g7, Rep::physical);
  const auto& r = g7.radial_nodes();
  for (std::size_t j = 0; j < want.v.size(); ++j)
    want.v[j] = evolved_gaussian(1.0, 2.0, r[j] * r[j], 7);
  CHECK(rel_l2(ut, want) < 1e-5);
}

TEST_CASE("radial gradient: derivative of the gaussian") {
  const Field fhat = fourier_forward(radial_gaussian(g3, 1.0));
  const auto parts = gradient(fhat);
  REQUIRE(parts.size() == 1);
  Field want(g3, Rep::physical);
  const auto& r = g3.radial_nodes();
  for (std::size_t j = 0; j < want.v.size(); ++j)
    want.v[j] = -2.0 * M_PI * r[j] * std::exp(-M_PI * r[j] * r[j]);
  CHECK(rel_l2(parts[0], want) < 1e-5);

  // gradient magnitude is |d/dr| for radial profiles
  const Field mag = gradient_magnitude(fhat);
  for (std::size_t j = 0; j < mag.v.size(); j += 97)
    CHECK(std::abs(mag.v[j]) ==
          doctest::Approx(std::abs(want.v[j])).epsilon(1e-4));
}

TEST_CASE("radial grid bookkeeping: octave alignment and dyadic range") {
  CHECK(g3.nodes_per_octave() == 64);
  CHECK(g3.radial_points() == 64 * 14 + 1);
  CHECK(g3.freq_points() == 64 * 7 + 1);
  CHECK(g3.default_kmin() == -6);
  CHECK(g3.default_kmax() == 2);
  CHECK(g3.max_freq() == doctest::Approx(4.0));

  // plain geometric constructor: not log2-aligned, transforms still work
  const Grid gp = Grid::radial(3, 400, 1.0 / 1024, 16.0, 300, 1.0 / 32, 4.0);
  CHECK(gp.nodes_per_octave() == 0);
  const Field f = radial_gaussian(gp, 1.0);
  const Field fhat = fourier_forward(f);
  Field want(gp, Rep::frequency);
  const auto& rho = gp.freq_nodes();
  for (std::size_t k = 0; k < want.v.size(); ++k)
    want.v[k] = std::exp(-M_PI * rho[k] * rho[k]);
  CHECK(rel_l2(fhat, want) < 1e-5);
}

TEST_CASE("radial boundary mass: outermost octave fraction") {
  CHECK(boundary_mass_fraction(radial_gaussian(g3, 1.0)) < 1e-10);
  Field edge(g3, Rep::physical);
  const auto& r = g3.radial_nodes();
  for (std::size_t j = 0; j < edge.v.size(); ++j) {
    const double d = r[j] - 12.0;
    edge.v[j] = std::exp(-d * d);
  }
  CHECK(boundary_mass_fraction(edge) > 0.1);
}
