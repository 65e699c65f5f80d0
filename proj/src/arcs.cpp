#include "jetcheck/arcs.hpp"

#include <cmath>
#include <limits>

#include "jetcheck/fit.hpp"

namespace jetcheck {

ArcProbe::ArcProbe(std::vector<PuiseuxPolynomial> components, std::vector<double> grid)
    : curve(std::move(components)), t_grid(std::move(grid)) {
  if (curve.empty()) throw InputError("arc needs at least one component");
  for (std::size_t i = 0; i < curve.size(); ++i)
    for (const auto& term : curve[i].terms())
      if (sgn(term.exponent) <= 0)
        throw InputError("arc component " + std::to_string(i + 1) + " does not vanish at t = 0");
  if (t_grid.empty()) throw InputError("arc grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i])) throw InputError("arc grid values must be positive");
    if (i > 0 && !(t_grid[i] < t_grid[i - 1])) throw InputError("arc grid must be strictly decreasing");
  }
}

ArcProbe ArcProbe::parse(const std::vector<std::string>& components, std::vector<double> grid) {
  std::vector<PuiseuxPolynomial> curve;
  for (std::size_t i = 0; i < components.size(); ++i) {
    try {
      curve.push_back(parse_arc_component(components[i]));
    } catch (const InputError& e) {
      throw InputError("arc component " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return ArcProbe(std::move(curve), std::move(grid));
}

ArcProbe ArcProbe::parse(const std::vector<std::string>& components) { return parse(components, default_arc_grid()); }

Eigen::VectorXd ArcProbe::point(double t) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(curve.size()));
  for (std::size_t i = 0; i < curve.size(); ++i) x(static_cast<Eigen::Index>(i)) = curve[i].evaluate(t);
  return x;
}

std::vector<double> default_arc_grid() {
  std::vector<double> grid;
  for (int k = 2; k <= 20; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

std::vector<ArcOrder> arc_orders(const ArcProbe& probe, const SigmaSet& sigma,
                                 const std::vector<ScalarField>& quantities) {
  if (probe.dimension() != sigma.ambient_dim())
    throw InputError("arc lives in R^" + std::to_string(probe.dimension()) + ", Sigma in R^" +
                     std::to_string(sigma.ambient_dim()));
  std::vector<Eigen::VectorXd> points;
  std::vector<double> distances;
  for (double t : probe.t_grid) {
    points.push_back(probe.point(t));
    distances.push_back(distance_to_sigma(sigma, points.back()));
  }
  std::vector<ArcOrder> out;
  for (std::size_t q = 0; q < quantities.size(); ++q) {
    std::vector<double> xs, ys;
    bool all_zero = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double value = std::abs(quantities[q](points[i]));
      if (value != 0.0) all_zero = false;
      if (!(value > 0.0) || !std::isfinite(value) || !(distances[i] > 0.0)) continue;
      xs.push_back(std::log(distances[i]));
      ys.push_back(std::log(value));
    }
    ArcOrder order;
    order.usable_points = static_cast<int>(xs.size());
    if (all_zero) {
      order.order = std::numeric_limits<double>::infinity();
      order.degenerate = true;
      out.push_back(order);
      continue;
    }
    if (xs.size() < 4)
      throw EstimationError("quantity " + std::to_string(q + 1) + " has only " + std::to_string(xs.size()) +
                            " usable grid points along the arc (need 4)");
    const LineFit fit = fit_line(xs, ys);
    order.order = fit.slope;
    order.r2 = fit.r2;
    out.push_back(order);
  }
  return out;
}

}  // namespace jetcheck
