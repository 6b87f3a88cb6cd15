#pragma once
#include <cmath>
#include <functional>
#include <stdexcept>

#include <critnls/field.hpp>

namespace critnls {

// Power nonlinearity f(u) = mu |u|^p u with the energy-critical exponent
// p = 4/(n-2); mu = +1 defocusing, -1 focusing, 0 selects the linear equation.
// An optional pointwise hook replaces f (it must satisfy f(0) = 0 and the
// power-type growth bounds for the solver's contraction reasoning to apply).
struct NonlinearitySpec {
  double mu = 1.0;
  double p = 0;
  std::function<cplx(cplx)> hook;  // optional; overrides the power law

  static NonlinearitySpec power(int n, double mu_sign) {
    if (n < 3) throw std::invalid_argument("nonlinearity: need n >= 3");
    NonlinearitySpec s;
    s.mu = mu_sign;
    s.p = 4.0 / (n - 2);
    return s;
  }
  static NonlinearitySpec linear() { return NonlinearitySpec{0.0, 0.0, nullptr}; }

  bool is_linear() const { return !hook && mu == 0.0; }

  cplx eval(cplx u) const {
    if (hook) return hook(u);
    if (mu == 0.0) return 0.0;
    const double a = std::abs(u);
    if (a == 0.0) return 0.0;  // removable singularity: p > 0
    return mu * std::pow(a, p) * u;
  }

  // Wirtinger derivatives of the power law: f_z = mu (p/2 + 1) |u|^p and
  // f_zbar = mu (p/2) |u|^{p-2} u^2, with the 0 limit at u = 0.
  cplx f_z(cplx u) const {
    const double a = std::abs(u);
    if (a == 0.0 || mu == 0.0) return 0.0;
    return mu * (0.5 * p + 1.0) * std::pow(a, p);
  }
  cplx f_zbar(cplx u) const {
    const double a = std::abs(u);
    if (a == 0.0 || mu == 0.0) return 0.0;
    return mu * 0.5 * p * std::pow(a, p) * (u * u) / (a * a);
  }
};

// Pointwise f(u); physical representation required.
inline Field apply_nonlinearity(const Field& u, const NonlinearitySpec& spec) {
  u.require(Rep::physical, "apply_nonlinearity");
  Field out(u.grid, Rep::physical);
  for (std::size_t i = 0; i < u.v.size(); ++i) out.v[i] = spec.eval(u.v[i]);
  return out;
}

// Chain-rule assembly of one gradient component of f(u):
//   (grad f(u))_a = f_z(u) (grad u)_a + f_zbar(u) conj((grad u)_a).
inline Field nonlinearity_gradient_component(const Field& u, const Field& grad_u_a,
                                             const NonlinearitySpec& spec) {
  u.require(Rep::physical, "nonlinearity_gradient_component");
  grad_u_a.require(Rep::physical, "nonlinearity_gradient_component");
  Field out(u.grid, Rep::physical);
  for (std::size_t i = 0; i < u.v.size(); ++i)
    out.v[i] = spec.f_z(u.v[i]) * grad_u_a.v[i] +
               spec.f_zbar(u.v[i]) * std::conj(grad_u_a.v[i]);
  return out;
}

}  // namespace critnls
