#pragma once
#include <string>
#include <utility>
#include <vector>

#include <critnls/rational.hpp>
#include <critnls/trajectory.hpp>

namespace critnls {

// Exponent pair on the admissibility line 2/q + n/r = n/2, q >= 2 (checked in
// exact rational arithmetic; q may be infinite).
struct AdmissiblePair {
  Rational q, r;
  AdmissiblePair(Rational q_, Rational r_, int n);
};

bool is_admissible(const Rational& q, const Rational& r, int n);

// The finite sample standing in for "sup over all admissible pairs": both
// endpoint pairs (inf, 2) and (2, 2n/(n-2)) plus three interior pairs
// including the symmetric pair (2(n+2)/n, 2(n+2)/n).
std::vector<AdmissiblePair> s0_pair_sample(int n);

// Spatial L^r by grid quadrature (r = inf -> max over samples). Converts to
// the physical representation internally when needed.
double spatial_norm(const Field& u, double r);

// L^q_t L^r_x: spatial norm per slice, then composite trapezoid in time
// (q = inf -> max over slices).
double mixed_norm(const Trajectory& u, double q, double r);

struct NormKind {
  enum class Tag { mixed, hsob, W, N1, S0, S1, X, Y };
  Tag tag = Tag::mixed;
  double q = 0, r = 0;  // mixed only
  double s = 0;         // hsob only

  static NormKind Mixed(double q, double r) { return {Tag::mixed, q, r, 0}; }
  static NormKind HomSobolev(double s) { return {Tag::hsob, 0, 0, s}; }
  static NormKind W() { return {Tag::W, 0, 0, 0}; }
  static NormKind N1() { return {Tag::N1, 0, 0, 0}; }
  static NormKind S0() { return {Tag::S0, 0, 0, 0}; }
  static NormKind S1() { return {Tag::S1, 0, 0, 0}; }
  static NormKind X() { return {Tag::X, 0, 0, 0}; }
  static NormKind Y() { return {Tag::Y, 0, 0, 0}; }
  const char* name() const;
};

struct LadderRange {
  int k_min = 0, k_max = 0;
  static LadderRange of(const Grid& g);
};

struct NormReport {
  std::string kind;
  double value = 0;
  double q = 0, r = 0, s = 0;  // exponents in play (0 = unused)
  std::string time_rule = "composite-trapezoid";
  std::string spatial_rule;  // "tensor-lattice" | "radial-log-quadrature"
  bool used_ladder = false;
  int k_min = 0, k_max = 0;
  std::string profile_id;  // bump profile, when used_ladder
  std::vector<std::pair<double, double>> pair_sample;  // S0/S1 only
};

// Evaluates the named norm; the ladder range applies to S0/S1/X/Y and
// defaults to the grid's resolvable dyadic range.
NormReport norm(const Trajectory& u, const NormKind& kind);
NormReport norm(const Trajectory& u, const NormKind& kind, LadderRange range);

// || (sum_N |P_N u|^2)^{1/2} ||_{q,r} / (sum_N ||P_N u||^2_{q,r})^{1/2};
// at most 1 + quadrature tolerance for q, r >= 2.
double square_sum_ratio(const Trajectory& u, double q, double r, LadderRange range);

// Scale-invariant exponents used throughout, as functions of the dimension.
double w_time_exponent(int n);   // 2(n+2)/(n-2)
double w_space_exponent(int n);  // 2n(n+2)/(n^2+4)
double x_weight_exponent(int n); // 8/(n+2), the dyadic weight on ||P_N u||^2
double x_time_exponent(int n);   // n+2
double x_space_exponent(int n);  // 2(n+2)/n
double y_time_exponent(int n);   // (n+2)/3
double y_space_exponent(int n);  // 2(n+2)/(n+4)

}  // namespace critnls
