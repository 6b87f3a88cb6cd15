#pragma once
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <critnls/grid.hpp>

namespace critnls {

enum class Rep { physical, frequency };

using cplx = std::complex<double>;

// Complex-valued sample set on a Grid at one instant, in either representation.
// Operations returning Fields check sample finiteness (divergence shows up as
// NaN/Inf and must surface as an error, never propagate silently).
struct Field {
  Grid grid;
  Rep rep = Rep::physical;
  std::vector<cplx> v;

  Field(Grid g, Rep r) : grid(std::move(g)), rep(r) {
    v.resize(rep == Rep::physical ? grid.physical_size() : grid.frequency_size());
  }
  Field(Grid g, Rep r, std::vector<cplx> data) : grid(std::move(g)), rep(r), v(std::move(data)) {
    const std::size_t want =
        rep == Rep::physical ? grid.physical_size() : grid.frequency_size();
    if (v.size() != want) throw std::invalid_argument("field: sample count mismatch");
  }

  std::size_t size() const { return v.size(); }
  cplx& operator[](std::size_t i) { return v[i]; }
  const cplx& operator[](std::size_t i) const { return v[i]; }

  void check_finite(const std::string& where) const {
    for (const auto& z : v)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::runtime_error("non-finite sample in " + where);
  }

  void require(Rep want, const std::string& op) const {
    if (rep != want)
      throw std::logic_error(op + ": field has the wrong representation tag");
  }

  Field& operator+=(const Field& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
  }
  Field& operator*=(cplx a) {
    for (auto& z : v) z *= a;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(cplx a, Field f) { return f *= a; }

  void check_compatible(const Field& o) const {
    if (grid != o.grid || rep != o.rep || v.size() != o.v.size())
      throw std::logic_error("field: incompatible operands");
  }
};

}  // namespace critnls
