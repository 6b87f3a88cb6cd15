#pragma once
#include <cstdint>
#include <random>

#include <critnls/trajectory.hpp>

namespace critnls {

// Deterministic random source: fixed engine (mt19937_64) plus an explicit
// Box-Muller transform, so streams are bit-reproducible across standard
// libraries (std::normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return (eng_() >> 11) * 0x1.0p-53;
  }
  double gaussian();
  cplx cgaussian() {  // independent N(0,1) real and imaginary parts
    const double re = gaussian();
    return {re, gaussian()};
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0;
};

// Frequency-representation random field concentrated on the dyadic annulus
// |xi| ~ N. Tensor mode: iid complex Gaussians per lattice point windowed by
// the band bump. Radial mode: a C-infinity log-frequency envelope (8 Gaussian
// bumps spanning [N/2, 2N] with seeded complex weights) times the band bump —
// rough envelopes leak slow physical tails that the r^{n-1} measure inflates
// past quadrature floors, skewing high-q norms.
Field random_band_field(const Grid& g, double N, Rng& rng);

// Random band-limited field spanning dyadic levels k in [k_lo, k_hi],
// normalized to unit Hdot^1; physical representation.
Field random_h1_field(const Grid& g, int k_lo, int k_hi, Rng& rng);

// Forcing trajectory F(t) = env(t) e^{it Delta} g with g a random band-N field
// and env a smooth time bump vanishing at both endpoints (so N1/Y norms are
// finite and panel quadrature sees smooth data). Slices are physical on tensor
// grids and frequency-side on radial grids, matching the solver conventions.
Trajectory random_forcing(const Grid& g, double N, double t0, double t1, int count,
                          Rng& rng);

// The smooth time bump used by random_forcing: 1 at the interval midpoint,
// 0 at both endpoints.
double time_envelope(double t, double t0, double t1);

// Reference datum exp(-pi |x|^2) in the grid's natural representation:
// physical samples on tensor grids, frequency samples (the profile is its own
// transform) on radial grids.
Field gaussian_datum(const Grid& g);

}  // namespace critnls
