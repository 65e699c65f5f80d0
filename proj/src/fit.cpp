#include "jetcheck/fit.hpp"

#include <algorithm>
#include <cmath>

#include "jetcheck/error.hpp"

namespace jetcheck {

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("fit_line: abscissae and ordinates differ in length");
  const std::size_t n = xs.size();
  if (n < 2) throw EstimationError("fit_line needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw EstimationError("fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += e * e;
  }
  // Exact power laws leave only rounding noise in both sums.
  const double scale = 1e-20 * (1.0 + my * my) * static_cast<double>(n);
  fit.r2 = syy <= scale ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
  return fit;
}

}  // namespace jetcheck
