#pragma once

namespace critnls {

// Surface area of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

// Radial Fourier kernel Phi_n(z) = (2 pi)^{n/2} z^{1-n/2} J_{n/2-1}(z), so that
// the transform of a radial profile is  f^(rho) = int_0^inf Phi_n(2 pi rho r) f(r) r^{n-1} dr.
// Phi_n(0) = sphere_area(n); even at z = 0 and entire in z^2.
double phi_kernel(int n, double z);

// Derivative kernel Psi_n(z) = (2 pi)^{n/2} z^{1-n/2} J_{n/2}(z); enters through
// d/dr Phi_n(2 pi rho r) = -2 pi rho Psi_n(2 pi rho r). Psi_n(0) = 0, odd-like near 0.
double psi_kernel(int n, double z);

}  // namespace critnls
