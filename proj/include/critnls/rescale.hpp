#pragma once
#include <critnls/trajectory.hpp>

namespace critnls {

// Scaling map u(x) -> lambda^{-(n-2)/2} u(x / lambda) with lambda = 2^{-j},
// applied to data and grid together: the returned field keeps the sample
// array layout but lives on the rescaled grid (tensor extent lambda*L; radial
// spans lambda*[r_min, r_max] and [rho_min, rho_max]/lambda), with values
// multiplied by lambda^{-(n-2)/2} (physical) or lambda^{(n+2)/2} (frequency).
// Every continuum norm then transforms exactly at machine precision — the
// Hdot^1 norm and all the scale-invariant spacetime norms are invariant bit
// for bit up to rounding. Both signs of j are exact.
Field dyadic_rescale(const Field& f, int j);

// Trajectory version: slices rescaled and times multiplied by lambda^2 = 4^{-j}.
Trajectory dyadic_rescale(const Trajectory& u, int j);

// The rescaled companion of a grid (used to prepare data directly at scale j).
Grid rescaled_grid(const Grid& g, int j);

}  // namespace critnls
