#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "jetcheck/parser.hpp"
#include "jetcheck/sigma.hpp"

namespace jetcheck {

/// Curve t -> gamma(t) with gamma(0) = 0, probed on a grid decreasing to 0.
struct ArcProbe {
  std::vector<PuiseuxPolynomial> curve;
  std::vector<double> t_grid;

  /// Validates gamma(0) = 0 (every exponent positive) and a strictly
  /// decreasing positive grid.
  ArcProbe(std::vector<PuiseuxPolynomial> components, std::vector<double> grid);

  static ArcProbe parse(const std::vector<std::string>& components, std::vector<double> grid);
  static ArcProbe parse(const std::vector<std::string>& components);

  Eigen::VectorXd point(double t) const;
  std::size_t dimension() const { return curve.size(); }
};

/// t_k = 2^-k for k = 2..20.
std::vector<double> default_arc_grid();

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

struct ArcOrder {
  /// Fitted exponent of q against d(gamma(t), Sigma); +infinity when q
  /// vanishes at every grid point.
  double order = 0.0;
  bool degenerate = false;
  double r2 = 1.0;
  int usable_points = 0;
};

/// Least-squares slope of log q(gamma(t)) against log d(gamma(t), Sigma)
/// for each quantity. Grid points with q = 0 or d = 0 are skipped; fewer
/// than 4 usable points throws EstimationError (unless q vanishes on the
/// whole grid, which is reported as a degenerate +infinity order).
std::vector<ArcOrder> arc_orders(const ArcProbe& probe, const SigmaSet& sigma,
                                 const std::vector<ScalarField>& quantities);

}  // namespace jetcheck
