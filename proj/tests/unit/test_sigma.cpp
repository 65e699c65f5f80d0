#include <doctest.h>

#include <cmath>
#include <random>

#include "jetcheck/parser.hpp"
#include "jetcheck/sigma.hpp"

using namespace jetcheck;

namespace {

// Distance to the curve t -> c(t) by a dense scan and golden-section polish.
template <class Curve>
double curve_distance(const Eigen::Vector2d& x, Curve c, double lo, double hi) {
  const int steps = 200000;
  double best_t = lo, best = 1e300;
  for (int i = 0; i <= steps; ++i) {
    const double t = lo + (hi - lo) * i / steps;
    const double v = (x - c(t)).norm();
    if (v < best) best = v, best_t = t;
  }
  double a = best_t - (hi - lo) / steps, b = best_t + (hi - lo) / steps;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double m1 = b - g * (b - a), m2 = a + g * (b - a);
    if ((x - c(m1)).norm() < (x - c(m2)).norm())
      b = m2;
    else
      a = m1;
  }
  return std::min(best, (x - c((a + b) / 2)).norm());
}

SigmaSet zero_set(const std::string& eq) {
  return SigmaSet::polynomial_zero_set({parse_polynomial(eq, 2).cast<double>()});
}

}  // namespace

TEST_CASE("origin and subspace distances") {
  const SigmaSet o = SigmaSet::origin(3);
  CHECK(distance_to_sigma(o, Eigen::Vector3d(1, 2, 2)) == doctest::Approx(3.0));

  Eigen::MatrixXd span(3, 2);
  span << 1, 1, 1, -1, 0, 2;  // not orthonormal
  const SigmaSet s = SigmaSet::linear_subspace(span);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector3d x(g(rng), g(rng), g(rng));
    const Eigen::VectorXd coeffs = (span.transpose() * span).ldlt().solve(span.transpose() * x);
    const double oracle = (x - span * coeffs).norm();
    CHECK(distance_to_sigma(s, x) == doctest::Approx(oracle).epsilon(1e-12));
  }
  CHECK(s.normal_basis().cols() == 1);
  CHECK_THROWS_AS(SigmaSet::linear_subspace(Eigen::MatrixXd::Identity(2, 2)), InputError);
}

TEST_CASE("axis-aligned subspaces get coordinate normals") {
  Eigen::MatrixXd axis(3, 1);
  axis << 0, 1, 0;
  const SigmaSet s = SigmaSet::linear_subspace(axis);
  const Eigen::MatrixXd& nb = s.normal_basis();
  REQUIRE(nb.cols() == 2);
  CHECK(std::abs(nb(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(nb(2, 1)) == doctest::Approx(1.0));
}

TEST_CASE("parabola distance against a dense oracle") {
  const SigmaSet p = zero_set("x2 - x1^2");
  auto curve = [](double t) { return Eigen::Vector2d(t, t * t); };
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Vector2d x(u(rng), u(rng));
    const double oracle = curve_distance(x, curve, -2.0, 2.0);
    const double d = distance_to_sigma(p, x);
    CHECK(d >= oracle * (1 - 1e-9) - 1e-14);
    CHECK(d <= oracle * (1 + 1e-6) + 1e-14);
    const Eigen::VectorXd z = project_to_sigma(p, x);
    CHECK(constraint_residual(p, z) <= 1e-10);
  }
}

TEST_CASE("cusp distance against a dense oracle") {
  const SigmaSet c = zero_set("x2^2 - x1^3");
  auto curve = [](double t) { return Eigen::Vector2d(t * t, t * t * t); };
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int trial = 0; trial < 15; ++trial) {
    const Eigen::Vector2d x(u(rng), u(rng));
    const double oracle = curve_distance(x, curve, -1.5, 1.5);
    const double d = distance_to_sigma(c, x);
    CHECK(d >= oracle * (1 - 1e-9) - 1e-14);
    CHECK(d <= oracle * (1 + 1e-6) + 1e-14);
  }
}

TEST_CASE("zero-set validation") {
  CHECK_THROWS_AS(zero_set("x1 + 1"), InputError);
  const SigmaSet s = SigmaSet::polynomial_zero_set(
      {parse_polynomial("x1 - x1", 2).cast<double>(), parse_polynomial("x2", 2).cast<double>()});
  CHECK(s.warnings().size() == 1);
  CHECK_THROWS_AS(SigmaSet::polynomial_zero_set({parse_polynomial("0*x1", 2).cast<double>()}), InputError);
}

TEST_CASE("rotations carry distances along") {
  const double th = 0.7;
  Eigen::Matrix2d q;
  q << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Eigen::MatrixXd axis(2, 1);
  axis << 1, 0;
  const SigmaSet s = SigmaSet::linear_subspace(axis);
  const SigmaSet r = s.transformed(q);
  const Eigen::Vector2d x(0.2, -0.4);
  CHECK(distance_to_sigma(r, q * x) == doctest::Approx(distance_to_sigma(s, x)).epsilon(1e-14));

  const SigmaSet p = zero_set("x2 - x1^2");
  const SigmaSet pr = p.transformed(q);
  CHECK(distance_to_sigma(pr, q * x) == doctest::Approx(distance_to_sigma(p, x)).epsilon(1e-8));
}

TEST_CASE("normal directions") {
  const SigmaSet p = zero_set("x2 - x1^2");
  const Eigen::MatrixXd n = normal_directions(p, Eigen::Vector2d(0.5, 0.25));
  REQUIRE(n.cols() == 1);
  const Eigen::Vector2d expected = Eigen::Vector2d(-1.0, 1.0).normalized();
  CHECK(std::abs(n.col(0).dot(expected)) == doctest::Approx(1.0));
  CHECK(normal_directions(zero_set("x2^2 - x1^3"), Eigen::Vector2d::Zero()).cols() == 0);
}
