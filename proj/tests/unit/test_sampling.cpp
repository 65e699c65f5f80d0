#include <doctest.h>

#include <cmath>

#include "jetcheck/arcs.hpp"
#include "jetcheck/conditions.hpp"
#include "jetcheck/fit.hpp"
#include "jetcheck/parser.hpp"
#include "jetcheck/sampling.hpp"

using namespace jetcheck;

TEST_CASE("shell index boundaries") {
  CHECK(shell_index(0.5, 12, 0.5) == 0);
  CHECK(shell_index(0.5, 12, 0.25) == 1);
  CHECK(shell_index(0.5, 12, 0.2500001) == 0);
  CHECK(shell_index(0.5, 12, 0.6) == -1);
  CHECK(shell_index(0.5, 12, 0.0) == -1);
  CHECK(shell_index(0.5, 3, 0.01) == -1);
  for (int k = 0; k < 12; ++k) CHECK(shell_index(0.5, 12, std::ldexp(0.5, -k)) == k);
}

TEST_CASE("shell samples respect their invariants") {
  Eigen::MatrixXd axis(3, 1);
  axis << 1, 0, 0;
  const SigmaSet s = SigmaSet::linear_subspace(axis);
  const ShellSample a = sample_shells(s, 0.5, 10, 40, 9);
  REQUIRE(a.shells.size() == 10);
  CHECK(a.nonempty_shells() == 10);
  for (const auto& shell : a.shells) {
    CHECK(shell.points.size() == 40);
    for (const auto& pt : shell.points) {
      CHECK(pt.distance > shell.inner);
      CHECK(pt.distance <= shell.outer);
      CHECK(pt.x.norm() <= 0.5);
      CHECK(pt.distance == doctest::Approx(distance_to_sigma(s, pt.x)).epsilon(1e-14));
    }
  }
  const ShellSample b = sample_shells(s, 0.5, 10, 40, 9);
  const ShellSample c = sample_shells(s, 0.5, 10, 40, 10);
  CHECK(a.shells[3].points[5].x == b.shells[3].points[5].x);
  CHECK(a.shells[3].points[5].x != c.shells[3].points[5].x);
  CHECK_THROWS_AS(sample_shells(s, -1.0, 10, 40, 1), InputError);
}

TEST_CASE("zero-set samples stay in their shells") {
  const SigmaSet p = SigmaSet::polynomial_zero_set({parse_polynomial("x2 - x1^2", 2).cast<double>()});
  const ShellSample a = sample_shells(p, 0.5, 6, 10, 4);
  for (const auto& shell : a.shells) {
    CHECK(shell.points.size() == 10);
    for (const auto& pt : shell.points) {
      CHECK(pt.distance > shell.inner);
      CHECK(pt.distance <= shell.outer);
    }
  }
}

TEST_CASE("horn filter") {
  const SigmaSet o = SigmaSet::origin(2);
  const ShellSample a = sample_shells(o, 0.5, 6, 50, 2);
  const PolyMap f = parse_map({"x1^2"}, 2);
  const ShellSample h = horn_filter(a, f, 3, 0.5);
  std::size_t expected = 0;
  for (const auto& shell : a.shells)
    for (const auto& pt : shell.points)
      if (pt.x(0) * pt.x(0) <= 0.5 * std::pow(pt.distance, 3)) ++expected;
  CHECK(h.size() == expected);
  CHECK(h.size() < a.size());
  // |x|^2 <= d^2 everywhere, so the degree-2 horn of x1^2 keeps everything.
  CHECK(horn_filter(a, f, 2, 1.0).size() == a.size());
}

TEST_CASE("line fit") {
  const std::vector<double> xs{0, 1, 2, 3}, ys{1, 3, 5, 7};
  const LineFit fit = fit_line(xs, ys);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(fit_line(one, one), EstimationError);
}

TEST_CASE("exponent estimate recovers power laws") {
  const SigmaSet o = SigmaSet::origin(2);
  const ShellSample a = sample_shells(o, 0.5, 12, 30, 1);
  const auto est = estimate_exponent(a, [](const Eigen::VectorXd& x) { return 3.0 * std::pow(x.norm(), 3); });
  REQUIRE(est.slope);
  CHECK(*est.slope == doctest::Approx(3.0).epsilon(0.02));
  CHECK(est.usable_shells == 12);
  CHECK_THROWS_AS(estimate_exponent(a, [](const Eigen::VectorXd&) { return 0.0; }), EstimationError);
}

TEST_CASE("arc orders") {
  const SigmaSet o = SigmaSet::origin(2);
  const ArcProbe diag = ArcProbe::parse({"t", "t^(3/2)"});
  const PolyMap f = parse_map({"x1^2"}, 2);
  const auto orders = arc_orders(diag, o,
                                 {[&](const Eigen::VectorXd& x) { return eval_map(f, x).norm(); },
                                  [](const Eigen::VectorXd&) { return 0.0; }});
  CHECK(orders[0].order == doctest::Approx(2.0).epsilon(0.01));
  CHECK(orders[1].degenerate);
  CHECK(std::isinf(orders[1].order));
  CHECK_THROWS_AS(ArcProbe::parse({"1 + t", "t"}), InputError);
  CHECK_THROWS_AS(ArcProbe::parse({"t"}, {0.5, 0.6}), InputError);
}
