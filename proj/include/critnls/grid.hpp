#pragma once
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace critnls {

enum class GridMode { full_tensor, radial };

// Spatial discretization descriptor plus cached transform machinery.
//
// full_tensor: the cube [-L/2, L/2]^n sampled at M points per axis (M a power of
// two), x_j = -L/2 + j L/M, with the dual frequency lattice xi_k = k/L in DFT
// ordering. Supports n in {3, 4}.
//
// radial: radial profiles on geometrically spaced nodes r_j in [r_min, r_max]
// with log-trapezoid quadrature weights, plus an independent geometric frequency
// node family rho_k. The transform pair is realized by direct quadrature against
// the dimension-n Bessel kernels (dense matrices, built lazily). Any n >= 3
// (kernels implemented for n <= 8).
//
// Value-semantic handle over immutable shared state; equality is structural.
class Grid {
 public:
  static Grid tensor(int n, int points_per_axis, double extent);
  static Grid radial(int n, int radial_points, double r_min, double r_max,
                     int freq_points, double rho_min, double rho_max);
  // Log2-aligned radial grid: nodes 2^(k/per_octave) covering the given octave
  // ranges endpoint-inclusive; exact dyadic rescaling is an index shift.
  static Grid radial_octaves(int n, int per_octave, int r_oct_lo, int r_oct_hi,
                             int rho_oct_lo, int rho_oct_hi);

  int dim() const;
  GridMode mode() const;

  // full-tensor accessors
  int points_per_axis() const;
  double extent() const;
  double cell_volume() const;       // (L/M)^n
  double freq_cell_volume() const;  // (1/L)^n
  // axis coordinate/frequency tables (size M)
  const std::vector<double>& axis_coords() const;
  const std::vector<double>& axis_freqs() const;
  void fft(std::complex<double>* data, int sign) const;  // unscaled in-place DFT

  // radial accessors
  int radial_points() const;
  int freq_points() const;
  const std::vector<double>& radial_nodes() const;
  const std::vector<double>& radial_weights() const;  // log-trapezoid dr weights
  const std::vector<double>& freq_nodes() const;
  const std::vector<double>& freq_weights() const;
  int nodes_per_octave() const;  // 0 when nodes are not log2-aligned
  const Eigen::MatrixXd& analysis() const;           // physical -> frequency
  const Eigen::MatrixXd& synthesis() const;          // frequency -> physical
  const Eigen::MatrixXd& radial_derivative() const;  // frequency -> d/dr physical

  // representation-size helpers
  std::size_t physical_size() const;
  std::size_t frequency_size() const;

  // |xi|^2 per packed frequency index (tensor) or rho^2 per node (radial)
  const std::vector<double>& freq_sq() const;
  // (-1)^{sum of index components} per packed frequency index (tensor only)
  const std::vector<double>& parity() const;

  double max_freq() const;  // largest |xi| (tensor: sqrt(n)*M/(2L)) or rho_max
  int default_kmin() const;
  int default_kmax() const;  // ceil(log2(max_freq()))

  bool operator==(const Grid& o) const;
  bool operator!=(const Grid& o) const { return !(*this == o); }

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  explicit Grid(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace critnls
