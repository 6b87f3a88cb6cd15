#pragma once
#include <cmath>
#include <stdexcept>
#include <vector>

#include <critnls/field.hpp>

namespace critnls {

// Time-indexed sequence of Fields on a common Grid over [t0, t1], uniformly
// sampled (relative spacing tolerance 1e-12), endpoints included.
struct Trajectory {
  Grid grid;
  std::vector<double> times;
  std::vector<Field> slices;

  Trajectory(Grid g, std::vector<double> ts, std::vector<Field> fs)
      : grid(std::move(g)), times(std::move(ts)), slices(std::move(fs)) {
    validate();
  }

  static Trajectory uniform(const Grid& g, double t0, double t1, int count) {
    if (count < 2) throw std::invalid_argument("trajectory: need at least 2 samples");
    std::vector<double> ts(count);
    const double dt = (t1 - t0) / (count - 1);
    for (int k = 0; k < count; ++k) ts[k] = t0 + dt * k;
    ts.back() = t1;
    std::vector<Field> fs;
    fs.reserve(count);
    for (int k = 0; k < count; ++k) fs.emplace_back(g, Rep::physical);
    return Trajectory(g, std::move(ts), std::move(fs));
  }

  int steps() const { return static_cast<int>(times.size()) - 1; }
  std::size_t size() const { return times.size(); }
  double t0() const { return times.front(); }
  double t1() const { return times.back(); }
  double dt() const { return (t1() - t0()) / steps(); }

  Field& at(int k) { return slices[k]; }
  const Field& at(int k) const { return slices[k]; }

  void validate() const {
    if (times.size() < 2 || times.size() != slices.size())
      throw std::invalid_argument("trajectory: times/slices mismatch");
    const double step = (times.back() - times.front()) / (times.size() - 1);
    if (!(step > 0)) throw std::invalid_argument("trajectory: times must increase");
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
      const double d = times[k + 1] - times[k];
      if (std::abs(d - step) > 1e-12 * std::max(std::abs(step), 1.0))
        throw std::invalid_argument("trajectory: non-uniform time lattice");
    }
    for (const auto& f : slices)
      if (f.grid != grid) throw std::invalid_argument("trajectory: slice grid mismatch");
  }
};

}  // namespace critnls
