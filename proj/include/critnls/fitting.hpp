#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

namespace critnls {

struct FitResult {
  double slope = 0;
  double intercept = 0;       // log-space intercept
  double r2 = 0;              // coefficient of determination of the log-log fit
  int points = 0;             // samples actually used
  double decades = 0;         // log10 span of the abscissa actually used
};

// Least-squares line through (log x, log y). Nonpositive or non-finite samples
// are skipped (0/0 ratios are excluded from fits, never imputed).
inline FitResult loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  FitResult out;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    if (xs[i] > 0 && ys[i] > 0 && std::isfinite(xs[i]) && std::isfinite(ys[i])) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  out.points = static_cast<int>(lx.size());
  if (out.points < 2) return out;
  double mx = 0, my = 0;
  for (int i = 0; i < out.points; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= out.points;
  my /= out.points;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < out.points; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0) return out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r2 = (syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  double lo = lx[0], hi = lx[0];
  for (double v : lx) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.decades = (hi - lo) / std::log(10.0);
  return out;
}

}  // namespace critnls
