#pragma once
#include <vector>

#include <critnls/field.hpp>

namespace critnls {

// Continuous-convention transforms: values approximate f^(xi) = int e^{-2 pi i x.xi} f dx,
// discrete sums scaled by cell volume (forward) and frequency-cell volume (inverse).
// On radial grids this is the dimension-n Fourier-Bessel quadrature transform.
Field fourier_forward(const Field& f);
Field fourier_inverse(const Field& f);

// Free propagator e^{it Delta}: frequency multiplier e^{-4 pi^2 i t |xi|^2}.
// Returns the same representation tag as the input.
Field propagate(const Field& f, double t);

// Physical-space form of the free propagator on radial grids,
//   (4 pi i t)^{-n/2} int e^{i(r^2+s^2)/(4t)} Phi_n(r s / (2t)) u0(s) s^{n-1} ds,
// evaluated on out_grid's radial nodes. The quadrature localizes on the data
// support, so it stays accurate at large t where the frequency-side chirp is
// unresolved. Requires |t| > 0.
Field propagate_kernel(const Field& u0_physical, double t, const Grid& out_grid);

// |nabla|^s frequency multiplier; s = 0 is the identity, zero frequency maps to
// 0 for s > 0, s < 0 is rejected.
Field fractional_derivative(const Field& f, double s);

// Gradient components in physical representation: n fields (tensor) or the
// single radial derivative d/dr (radial).
std::vector<Field> gradient(const Field& u);

// Pointwise Euclidean magnitude of the gradient, physical representation
// (samples are real-valued, stored in the complex container).
Field gradient_magnitude(const Field& u);

// Quadrature L^2 norm in the field's own representation (Plancherel-consistent).
double l2_norm(const Field& f);

// Homogeneous Sobolev norm ||f||_{H^s-dot} computed frequency-side.
double hdot_norm(const Field& f, double s);

// Fraction of |f|^2 mass within two cells of the domain boundary (tensor) or in
// the outermost octave (radial); experiments abort when this exceeds tolerance,
// since wraparound/truncation then invalidates dispersive measurements.
double boundary_mass_fraction(const Field& f_physical);

}  // namespace critnls
