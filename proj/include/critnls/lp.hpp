#pragma once
#include <map>
#include <stdexcept>
#include <string>

#include <critnls/field.hpp>

namespace critnls {

// Identifier of the concrete smooth bump profile used by every dyadic
// projector; recorded in experiment reports since empirical constants
// (Bernstein, Strichartz, ...) depend on the choice of profile.
inline constexpr const char* kBumpProfileId = "phi-exp1-v1";

// phi(s): 1 for s <= 1, 0 for s >= 2, exp(1 - 1/(1 - (s-1)^2)) in between.
// C-infinity, monotone on [1, 2]; argument is |xi| / N.
double lp_bump(double s);

enum class LpKind { band, low, high };

// Dyadic projector: multiplier phi(|xi|/N) - phi(2|xi|/N) (band, supported in
// N/2 <= |xi| <= 2N), phi(|xi|/N) (low), or 1 - phi(|xi|/N) (high). N must be
// a power of two with N/2 within the grid's resolvable frequency range.
// Returns the same representation tag as the input.
Field lp_project(const Field& f, double N, LpKind kind);

struct LadderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite dyadic decomposition f = residual_low + sum_k band_k, where band_k
// isolates |xi| ~ 2^k for k in [k_min, k_max] and residual_low carries the
// remainder below 2^{k_min - 1}. Bands are keyed by the exponent k and stored
// in the representation of the input field.
struct DyadicLadder {
  Grid grid;
  int k_min = 0, k_max = 0;
  std::map<int, Field> bands;
  Field residual_low;
  std::string profile_id = kBumpProfileId;
  // relative L^2 defect of (residual_low multiplier + sum of band multipliers)
  // against 1 on the grid's frequency samples
  double reconstruction_error = 0;

  double band_frequency(int k) const { return std::exp2(double(k)); }
};

// Builds the ladder; throws LadderError when the multipliers fail to
// reconstruct the input within 1e-8 relative L^2 (k_max below the content of
// f, e.g. below the grid Nyquist exponent for broadband fields).
DyadicLadder build_ladder(const Field& f, int k_min, int k_max);

}  // namespace critnls
