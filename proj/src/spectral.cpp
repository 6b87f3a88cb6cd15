#include <critnls/spectral.hpp>

#include <cmath>

#include <critnls/bessel.hpp>

namespace critnls {

namespace {

Eigen::VectorXcd apply_real_matrix(const Eigen::MatrixXd& m, const std::vector<cplx>& x) {
  Eigen::VectorXd xr(x.size()), xi(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    xr[j] = x[j].real();
    xi[j] = x[j].imag();
  }
  Eigen::VectorXd yr = m * xr, yi = m * xi;
  Eigen::VectorXcd y(m.rows());
  for (int i = 0; i < m.rows(); ++i) y[i] = cplx(yr[i], yi[i]);
  return y;
}

Field from_eigen(const Grid& g, Rep rep, const Eigen::VectorXcd& y) {
  Field out(g, rep);
  for (int i = 0; i < y.size(); ++i) out.v[i] = y[i];
  return out;
}

}  // namespace

Field fourier_forward(const Field& f) {
  f.require(Rep::physical, "fourier_forward");
  if (f.grid.mode() == GridMode::full_tensor) {
    Field out(f.grid, Rep::frequency, f.v);
    f.grid.fft(out.v.data(), -1);
    const double scale = f.grid.cell_volume();
    const auto& par = f.grid.parity();
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] *= scale * par[k];
    out.check_finite("fourier_forward");
    return out;
  }
  Field out = from_eigen(f.grid, Rep::frequency, apply_real_matrix(f.grid.analysis(), f.v));
  out.check_finite("fourier_forward");
  return out;
}

Field fourier_inverse(const Field& f) {
  f.require(Rep::frequency, "fourier_inverse");
  if (f.grid.mode() == GridMode::full_tensor) {
    Field out(f.grid, Rep::physical, f.v);
    const auto& par = f.grid.parity();
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] *= par[k];
    f.grid.fft(out.v.data(), +1);
    const double scale = f.grid.freq_cell_volume();
    for (auto& z : out.v) z *= scale;
    out.check_finite("fourier_inverse");
    return out;
  }
  Field out = from_eigen(f.grid, Rep::physical, apply_real_matrix(f.grid.synthesis(), f.v));
  out.check_finite("fourier_inverse");
  return out;
}

namespace {

Field apply_multiplier_freq(const Field& fhat, auto&& mult) {
  Field out = fhat;
  const auto& fsq = out.grid.freq_sq();
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] *= mult(fsq[k]);
  return out;
}

// Applies a |xi|^2-dependent multiplier preserving the representation tag.
Field apply_multiplier(const Field& f, auto&& mult, const char* where) {
  if (f.rep == Rep::frequency) {
    Field out = apply_multiplier_freq(f, mult);
    out.check_finite(where);
    return out;
  }
  Field out = fourier_inverse(apply_multiplier_freq(fourier_forward(f), mult));
  out.check_finite(where);
  return out;
}

}  // namespace

Field propagate(const Field& f, double t) {
  return apply_multiplier(
      f,
      [t](double fsq) {
        const double phase = -4.0 * M_PI * M_PI * t * fsq;
        return cplx(std::cos(phase), std::sin(phase));
      },
      "propagate");
}

Field propagate_kernel(const Field& u0, double t, const Grid& out_grid) {
  u0.require(Rep::physical, "propagate_kernel");
  if (u0.grid.mode() != GridMode::radial || out_grid.mode() != GridMode::radial)
    throw std::logic_error("propagate_kernel: radial grids required");
  if (u0.grid.dim() != out_grid.dim())
    throw std::logic_error("propagate_kernel: dimension mismatch");
  if (t == 0) throw std::invalid_argument("propagate_kernel: t must be nonzero");
  const int n = u0.grid.dim();
  const auto& s = u0.grid.radial_nodes();
  const auto& w = u0.grid.radial_weights();
  const auto& r = out_grid.radial_nodes();
  const cplx pref = std::pow(cplx(0.0, 4.0 * M_PI * t), -0.5 * n);
  Field out(out_grid, Rep::physical);
  std::vector<cplx> src(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double ph = s[j] * s[j] / (4.0 * t);
    src[j] = u0.v[j] * cplx(std::cos(ph), std::sin(ph)) * std::pow(s[j], n - 1) * w[j];
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    cplx acc = 0;
    for (std::size_t j = 0; j < s.size(); ++j)
      acc += phi_kernel(n, r[i] * s[j] / (2.0 * t)) * src[j];
    const double ph = r[i] * r[i] / (4.0 * t);
    out.v[i] = pref * cplx(std::cos(ph), std::sin(ph)) * acc;
  }
  out.check_finite("propagate_kernel");
  return out;
}

Field fractional_derivative(const Field& f, double s) {
  if (s < 0) throw std::invalid_argument("fractional_derivative: s must be >= 0");
  if (s == 0) return f;
  return apply_multiplier(
      f, [s](double fsq) { return std::pow(fsq, 0.5 * s); }, "fractional_derivative");
}

std::vector<Field> gradient(const Field& u) {
  const Grid& g = u.grid;
  if (g.mode() == GridMode::radial) {
    Field uh = (u.rep == Rep::physical) ? fourier_forward(u) : u;
    Field out = from_eigen(g, Rep::physical,
                           apply_real_matrix(g.radial_derivative(), uh.v));
    out.check_finite("gradient");
    return {std::move(out)};
  }
  Field uh = (u.rep == Rep::frequency) ? u : fourier_forward(u);
  const int n = g.dim();
  const int M = g.points_per_axis();
  const auto& xis = g.axis_freqs();
  std::vector<Field> comps;
  comps.reserve(n);
  // packed row-major index: axis a has stride M^(n-1-a)
  std::vector<std::size_t> stride(n);
  stride[n - 1] = 1;
  for (int a = n - 2; a >= 0; --a) stride[a] = stride[a + 1] * M;
  for (int a = 0; a < n; ++a) {
    Field c = uh;
    for (std::size_t idx = 0; idx < c.v.size(); ++idx) {
      const int j = static_cast<int>((idx / stride[a]) % M);
      c.v[idx] *= cplx(0.0, 2.0 * M_PI * xis[j]);
    }
    comps.push_back(fourier_inverse(c));
    comps.back().check_finite("gradient");
  }
  return comps;
}

Field gradient_magnitude(const Field& u) {
  auto comps = gradient(u);
  Field out(u.grid, Rep::physical);
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    double s = 0;
    for (const auto& c : comps) s += std::norm(c.v[i]);
    out.v[i] = std::sqrt(s);
  }
  return out;
}

double l2_norm(const Field& f) {
  const Grid& g = f.grid;
  double s = 0;
  if (g.mode() == GridMode::full_tensor) {
    for (const auto& z : f.v) s += std::norm(z);
    s *= (f.rep == Rep::physical) ? g.cell_volume() : g.freq_cell_volume();
    return std::sqrt(s);
  }
  const auto& nodes = (f.rep == Rep::physical) ? g.radial_nodes() : g.freq_nodes();
  const auto& w = (f.rep == Rep::physical) ? g.radial_weights() : g.freq_weights();
  const int n = g.dim();
  for (std::size_t j = 0; j < f.v.size(); ++j)
    s += std::norm(f.v[j]) * std::pow(nodes[j], n - 1) * w[j];
  return std::sqrt(sphere_area(n) * s);
}

double hdot_norm(const Field& f, double s) {
  const Field& fh = f;
  if (f.rep == Rep::physical) return hdot_norm(fourier_forward(f), s);
  const Grid& g = fh.grid;
  const auto& fsq = g.freq_sq();
  double acc = 0;
  if (g.mode() == GridMode::full_tensor) {
    for (std::size_t k = 0; k < fh.v.size(); ++k)
      acc += std::pow(4.0 * M_PI * M_PI * fsq[k], s) * std::norm(fh.v[k]);
    return std::sqrt(acc * g.freq_cell_volume());
  }
  const auto& rho = g.freq_nodes();
  const auto& w = g.freq_weights();
  const int n = g.dim();
  for (std::size_t k = 0; k < fh.v.size(); ++k)
    acc += std::pow(4.0 * M_PI * M_PI * fsq[k], s) * std::norm(fh.v[k]) *
           std::pow(rho[k], n - 1) * w[k];
  return std::sqrt(sphere_area(n) * acc);
}

double boundary_mass_fraction(const Field& f) {
  f.require(Rep::physical, "boundary_mass_fraction");
  const Grid& g = f.grid;
  double total = 0, outer = 0;
  if (g.mode() == GridMode::full_tensor) {
    const int n = g.dim();
    const int M = g.points_per_axis();
    std::vector<std::size_t> stride(n);
    stride[n - 1] = 1;
    for (int a = n - 2; a >= 0; --a) stride[a] = stride[a + 1] * M;
    for (std::size_t idx = 0; idx < f.v.size(); ++idx) {
      const double m = std::norm(f.v[idx]);
      total += m;
      for (int a = 0; a < n; ++a) {
        const int j = static_cast<int>((idx / stride[a]) % M);
        if (j < 2 || j >= M - 2) {
          outer += m;
          break;
        }
      }
    }
  } else {
    const auto& r = g.radial_nodes();
    const auto& w = g.radial_weights();
    const int n = g.dim();
    const double knee = r.back() / 2.0;
    for (std::size_t j = 0; j < f.v.size(); ++j) {
      const double m = std::norm(f.v[j]) * std::pow(r[j], n - 1) * w[j];
      total += m;
      if (r[j] >= knee) outer += m;
    }
  }
  return total > 0 ? outer / total : 0.0;
}

}  // namespace critnls
