#include <critnls/rescale.hpp>

#include <cmath>

namespace critnls {

Grid rescaled_grid(const Grid& g, int j) {
  const double lam = std::exp2(double(-j));
  if (g.mode() == GridMode::full_tensor)
    return Grid::tensor(g.dim(), g.points_per_axis(), lam * g.extent());
  const auto& r = g.radial_nodes();
  const auto& rho = g.freq_nodes();
  return Grid::radial(g.dim(), g.radial_points(), lam * r.front(), lam * r.back(),
                      g.freq_points(), rho.front() / lam, rho.back() / lam);
}

Field dyadic_rescale(const Field& f, int j) {
  const double lam = std::exp2(double(-j));
  const int n = f.grid.dim();
  const double amp = (f.rep == Rep::physical) ? std::pow(lam, -0.5 * (n - 2))
                                              : std::pow(lam, 0.5 * (n + 2));
  Field out(rescaled_grid(f.grid, j), f.rep, f.v);
  out *= amp;
  return out;
}

Trajectory dyadic_rescale(const Trajectory& u, int j) {
  const double lam2 = std::exp2(double(-2 * j));
  std::vector<double> ts(u.times.size());
  for (std::size_t k = 0; k < ts.size(); ++k) ts[k] = lam2 * u.times[k];
  std::vector<Field> fs;
  fs.reserve(u.slices.size());
  for (const auto& s : u.slices) fs.push_back(dyadic_rescale(s, j));
  // bind the grid before the vector is moved from (argument evaluation order
  // is unspecified)
  const Grid gj = fs.front().grid;
  return Trajectory(gj, std::move(ts), std::move(fs));
}

}  // namespace critnls
