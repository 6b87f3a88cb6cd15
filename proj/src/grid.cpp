#include <critnls/grid.hpp>

#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include <critnls/bessel.hpp>

namespace critnls {

struct Grid::Impl {
  int n = 3;
  GridMode mode = GridMode::full_tensor;

  // tensor
  int M = 0;
  double L = 0;
  std::vector<double> xs, xis;       // per-axis coordinates / frequencies
  std::vector<double> fsq, par;      // packed |xi|^2 and parity
  fftw_plan plan_fwd = nullptr, plan_bwd = nullptr;
  std::vector<std::complex<double>> scratch;

  // radial
  int Mr = 0, Mrho = 0;
  int per_octave = 0;
  std::vector<double> r, wr, rho, wrho;
  mutable std::unique_ptr<Eigen::MatrixXd> A, B, G;
  mutable std::once_flag once_A, once_B, once_G;

  ~Impl() {
    if (plan_fwd) fftw_destroy_plan(plan_fwd);
    if (plan_bwd) fftw_destroy_plan(plan_bwd);
  }
};

namespace {

std::vector<double> geometric_nodes(double lo, double hi, int m) {
  std::vector<double> v(m);
  const double a = std::log(lo), b = std::log(hi);
  for (int j = 0; j < m; ++j) v[j] = std::exp(a + (b - a) * j / (m - 1));
  return v;
}

std::vector<double> log_trapezoid_weights(const std::vector<double>& nodes) {
  // dr = r * ds on a log-uniform grid; composite trapezoid halves the endpoints.
  const int m = static_cast<int>(nodes.size());
  const double ds = std::log(nodes.back() / nodes.front()) / (m - 1);
  std::vector<double> w(m);
  for (int j = 0; j < m; ++j) w[j] = nodes[j] * ds;
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

int detect_per_octave(const std::vector<double>& nodes) {
  // log2-aligned iff spacing in log2 is exactly 1/m for integer m and the first
  // node is an exact power 2^(k/m).
  const int M = static_cast<int>(nodes.size());
  const double span = std::log2(nodes.back() / nodes.front());
  const double per_oct = (M - 1) / span;
  const double rounded = std::round(per_oct);
  if (std::abs(per_oct - rounded) > 1e-9 * rounded) return 0;
  const double k0 = std::log2(nodes.front()) * rounded;
  if (std::abs(k0 - std::round(k0)) > 1e-9) return 0;
  return static_cast<int>(rounded);
}

}  // namespace

Grid Grid::tensor(int n, int points_per_axis, double extent) {
  if (n < 3) throw std::invalid_argument("grid: dimension must be >= 3");
  if (n > 4) throw std::invalid_argument("grid: full-tensor mode requires n <= 4");
  const int M = points_per_axis;
  if (M < 2 || (M & (M - 1)) != 0)
    throw std::invalid_argument("grid: points per axis must be a power of two");
  if (!(extent > 0)) throw std::invalid_argument("grid: extent must be positive");

  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->mode = GridMode::full_tensor;
  impl->M = M;
  impl->L = extent;
  impl->xs.resize(M);
  impl->xis.resize(M);
  const double h = extent / M;
  for (int j = 0; j < M; ++j) {
    impl->xs[j] = -0.5 * extent + h * j;
    const int k = (j <= M / 2) ? j : j - M;
    impl->xis[j] = k / extent;
  }
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= M;
  impl->fsq.resize(total);
  impl->par.resize(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double s = 0;
    int psum = 0;
    for (int a = n - 1; a >= 0; --a) {
      const int j = static_cast<int>(rest % M);
      rest /= M;
      s += impl->xis[j] * impl->xis[j];
      psum += j;
    }
    impl->fsq[idx] = s;
    impl->par[idx] = (psum % 2 == 0) ? 1.0 : -1.0;
  }
  impl->scratch.resize(total);
  std::vector<int> dims(n, M);
  auto* ptr = reinterpret_cast<fftw_complex*>(impl->scratch.data());
  impl->plan_fwd = fftw_plan_dft(n, dims.data(), ptr, ptr, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  impl->plan_bwd = fftw_plan_dft(n, dims.data(), ptr, ptr, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  return Grid(std::move(impl));
}

Grid Grid::radial(int n, int radial_points, double r_min, double r_max,
                  int freq_points, double rho_min, double rho_max) {
  if (n < 3) throw std::invalid_argument("grid: dimension must be >= 3");
  if (n > 8) throw std::invalid_argument("grid: radial kernels implemented for n <= 8");
  if (radial_points < 8 || freq_points < 8)
    throw std::invalid_argument("grid: too few radial nodes");
  if (!(0 < r_min && r_min < r_max) || !(0 < rho_min && rho_min < rho_max))
    throw std::invalid_argument("grid: radial spans must satisfy 0 < lo < hi");

  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->mode = GridMode::radial;
  impl->Mr = radial_points;
  impl->Mrho = freq_points;
  impl->r = geometric_nodes(r_min, r_max, radial_points);
  impl->wr = log_trapezoid_weights(impl->r);
  impl->rho = geometric_nodes(rho_min, rho_max, freq_points);
  impl->wrho = log_trapezoid_weights(impl->rho);
  impl->per_octave = detect_per_octave(impl->r);
  if (impl->per_octave != detect_per_octave(impl->rho)) impl->per_octave = 0;
  impl->fsq.resize(freq_points);
  for (int k = 0; k < freq_points; ++k) impl->fsq[k] = impl->rho[k] * impl->rho[k];
  return Grid(std::move(impl));
}

Grid Grid::radial_octaves(int n, int per_octave, int r_oct_lo, int r_oct_hi,
                          int rho_oct_lo, int rho_oct_hi) {
  if (r_oct_lo >= r_oct_hi || rho_oct_lo >= rho_oct_hi)
    throw std::invalid_argument("grid: octave ranges must be increasing");
  const int Mr = (r_oct_hi - r_oct_lo) * per_octave + 1;
  const int Mrho = (rho_oct_hi - rho_oct_lo) * per_octave + 1;
  return radial(n, Mr, std::exp2(double(r_oct_lo)), std::exp2(double(r_oct_hi)),
                Mrho, std::exp2(double(rho_oct_lo)), std::exp2(double(rho_oct_hi)));
}

int Grid::dim() const { return impl_->n; }
GridMode Grid::mode() const { return impl_->mode; }

int Grid::points_per_axis() const { return impl_->M; }
double Grid::extent() const { return impl_->L; }
double Grid::cell_volume() const {
  return std::pow(impl_->L / impl_->M, impl_->n);
}
double Grid::freq_cell_volume() const { return std::pow(1.0 / impl_->L, impl_->n); }
const std::vector<double>& Grid::axis_coords() const { return impl_->xs; }
const std::vector<double>& Grid::axis_freqs() const { return impl_->xis; }

void Grid::fft(std::complex<double>* data, int sign) const {
  if (impl_->mode != GridMode::full_tensor)
    throw std::logic_error("grid: fft requires a full-tensor grid");
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(sign == -1 ? impl_->plan_fwd : impl_->plan_bwd, p, p);
}

int Grid::radial_points() const { return impl_->Mr; }
int Grid::freq_points() const { return impl_->Mrho; }
const std::vector<double>& Grid::radial_nodes() const { return impl_->r; }
const std::vector<double>& Grid::radial_weights() const { return impl_->wr; }
const std::vector<double>& Grid::freq_nodes() const { return impl_->rho; }
const std::vector<double>& Grid::freq_weights() const { return impl_->wrho; }
int Grid::nodes_per_octave() const { return impl_->per_octave; }

namespace {

// A[i][j] = Phi_n(2 pi out_i in_j) in_j^{n-1} w_j : quadrature of the radial
// transform against the output node family. Self-inverse structure: the same
// constructor with the roles of (r, w) and (rho, v) swapped gives the inverse.
Eigen::MatrixXd transform_matrix(int n, const std::vector<double>& out,
                                 const std::vector<double>& in,
                                 const std::vector<double>& w_in) {
  const int rows = static_cast<int>(out.size());
  const int cols = static_cast<int>(in.size());
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = phi_kernel(n, 2.0 * M_PI * out[i] * in[j]) *
                std::pow(in[j], n - 1) * w_in[j];
  return m;
}

}  // namespace

const Eigen::MatrixXd& Grid::analysis() const {
  if (impl_->mode != GridMode::radial)
    throw std::logic_error("grid: analysis matrix requires a radial grid");
  std::call_once(impl_->once_A, [this] {
    impl_->A = std::make_unique<Eigen::MatrixXd>(
        transform_matrix(impl_->n, impl_->rho, impl_->r, impl_->wr));
  });
  return *impl_->A;
}

const Eigen::MatrixXd& Grid::synthesis() const {
  if (impl_->mode != GridMode::radial)
    throw std::logic_error("grid: synthesis matrix requires a radial grid");
  std::call_once(impl_->once_B, [this] {
    impl_->B = std::make_unique<Eigen::MatrixXd>(
        transform_matrix(impl_->n, impl_->r, impl_->rho, impl_->wrho));
  });
  return *impl_->B;
}

const Eigen::MatrixXd& Grid::radial_derivative() const {
  if (impl_->mode != GridMode::radial)
    throw std::logic_error("grid: derivative matrix requires a radial grid");
  std::call_once(impl_->once_G, [this] {
    // d/dr of the synthesis kernel: -2 pi rho_k Psi_n(2 pi r_i rho_k) rho_k^{n-1} v_k
    Eigen::MatrixXd g(impl_->Mr, impl_->Mrho);
    for (int i = 0; i < impl_->Mr; ++i)
      for (int k = 0; k < impl_->Mrho; ++k)
        g(i, k) = -2.0 * M_PI * impl_->rho[k] *
                  psi_kernel(impl_->n, 2.0 * M_PI * impl_->r[i] * impl_->rho[k]) *
                  std::pow(impl_->rho[k], impl_->n - 1) * impl_->wrho[k];
    impl_->G = std::make_unique<Eigen::MatrixXd>(std::move(g));
  });
  return *impl_->G;
}

std::size_t Grid::physical_size() const {
  if (impl_->mode == GridMode::full_tensor) return impl_->fsq.size();
  return static_cast<std::size_t>(impl_->Mr);
}

std::size_t Grid::frequency_size() const {
  if (impl_->mode == GridMode::full_tensor) return impl_->fsq.size();
  return static_cast<std::size_t>(impl_->Mrho);
}

const std::vector<double>& Grid::freq_sq() const { return impl_->fsq; }

const std::vector<double>& Grid::parity() const {
  if (impl_->mode != GridMode::full_tensor)
    throw std::logic_error("grid: parity table requires a full-tensor grid");
  return impl_->par;
}

double Grid::max_freq() const {
  if (impl_->mode == GridMode::full_tensor)
    return std::sqrt(double(impl_->n)) * impl_->M / (2.0 * impl_->L);
  return impl_->rho.back();
}

int Grid::default_kmin() const { return -6; }
int Grid::default_kmax() const {
  return static_cast<int>(std::ceil(std::log2(max_freq())));
}

bool Grid::operator==(const Grid& o) const {
  if (impl_ == o.impl_) return true;
  const Impl &a = *impl_, &b = *o.impl_;
  if (a.n != b.n || a.mode != b.mode) return false;
  if (a.mode == GridMode::full_tensor) return a.M == b.M && a.L == b.L;
  return a.Mr == b.Mr && a.Mrho == b.Mrho && a.r.front() == b.r.front() &&
         a.r.back() == b.r.back() && a.rho.front() == b.rho.front() &&
         a.rho.back() == b.rho.back();
}

}  // namespace critnls
