#pragma once
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace critnls {

// Exact rational arithmetic for the admissibility line 2/q + n/r = n/2.
// q = infinity is representable as 1/0 (only its reciprocal 0 is ever used).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  static Rational infinity() {
    Rational x;
    x.num = 1;
    x.den = 0;
    return x;
  }
  bool is_infinite() const { return den == 0; }

  void normalize() {
    if (den == 0) {
      num = (num >= 0) ? 1 : -1;
      return;
    }
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  Rational reciprocal() const {
    if (num == 0) return infinity();
    return Rational(den, num);
  }

  double value() const {
    if (den == 0) return num > 0 ? 1e308 * 10 : -1e308 * 10;  // +-inf via overflow
    return static_cast<double>(num) / static_cast<double>(den);
  }

  friend Rational operator+(Rational a, Rational b) {
    if (a.is_infinite() || b.is_infinite()) throw std::domain_error("rational: inf addition");
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(Rational a, Rational b) {
    if (a.is_infinite() || b.is_infinite()) throw std::domain_error("rational: inf product");
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return a.num * b.den < b.num * a.den;
  }
};

}  // namespace critnls
