#include <critnls/bessel.hpp>

#include <cassert>
#include <cmath>

namespace critnls {

double sphere_area(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

// Sum_{k>=0} (-z^2/4)^k * Gamma(a) / (k! Gamma(a+k)) via multiplicative updates.
// Converges for all z; used below the cancellation threshold only.
double kernel_series(double a, double z2over4) {
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 64; ++k) {
    term *= -z2over4 / ((k + 1.0) * (a + k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

// J_{nu}(z) for half-integer nu = m + 1/2 by upward recurrence from the closed
// forms at nu = -1/2, 1/2. Stable for z above the recurrence orders used here.
double bessel_half(int twice_nu, double z) {
  const double c = std::sqrt(2.0 / (M_PI * z));
  double jm = c * std::cos(z);  // nu = -1/2
  double jp = c * std::sin(z);  // nu = +1/2
  if (twice_nu == -1) return jm;
  double nu = 0.5;
  while (2 * nu < twice_nu) {
    const double jn = (2.0 * nu / z) * jp - jm;
    jm = jp;
    jp = jn;
    nu += 1.0;
  }
  return jp;
}

// Series threshold: below it the power series is exact to ~1e-13 even with the
// alternating-term cancellation; above it the asymptotic-regime evaluations are stable.
constexpr double kSeriesCut = 8.0;

}  // namespace

double phi_kernel(int n, double z) {
  assert(n >= 3 && n <= 8);
  z = std::abs(z);
  if (z <= kSeriesCut)
    return sphere_area(n) * kernel_series(0.5 * n, 0.25 * z * z);
  const double pref = std::pow(2.0 * M_PI, 0.5 * n) * std::pow(z, 1.0 - 0.5 * n);
  if (n % 2 == 0) return pref * std::cyl_bessel_j(double(n / 2 - 1), z);
  return pref * bessel_half(n - 2, z);  // order n/2 - 1 has twice_nu = n - 2
}

double psi_kernel(int n, double z) {
  assert(n >= 3 && n <= 8);
  const double sgn = (z < 0) ? -1.0 : 1.0;
  z = std::abs(z);
  if (z <= kSeriesCut) {
    // pi^{n/2} z Sum_k (-z^2/4)^k / (k! Gamma(n/2+1+k))
    const double base = std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
    return sgn * base * z * kernel_series(0.5 * n + 1.0, 0.25 * z * z);
  }
  const double pref = std::pow(2.0 * M_PI, 0.5 * n) * std::pow(z, 1.0 - 0.5 * n);
  if (n % 2 == 0) return sgn * pref * std::cyl_bessel_j(double(n / 2), z);
  return sgn * pref * bessel_half(n, z);  // order n/2 has twice_nu = n
}

}  // namespace critnls
