#pragma once

#include <span>

namespace jetcheck {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Coefficient of determination; 1 when the ordinates have no spread.
  double r2 = 1.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 2 points with
/// distinct abscissae.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace jetcheck
