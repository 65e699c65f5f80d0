#include <doctest.h>

#include <cmath>
#include <random>

#include "jetcheck/parser.hpp"
#include "jetcheck/perturbation.hpp"
#include "jetcheck/poly_map.hpp"
#include "jetcheck/sampling.hpp"

using namespace jetcheck;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) out(i++) = c;
  return out;
}

// Central differences, independent of the symbolic partials.
Eigen::MatrixXd fd_jacobian(const PolyMap& f, const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::MatrixXd j(static_cast<Eigen::Index>(f.p()), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd a = x, b = x;
    a(k) += h;
    b(k) -= h;
    j.col(k) = (eval_map(f, a) - eval_map(f, b)) / (2 * h);
  }
  return j;
}

}  // namespace

TEST_CASE("exact parsing and evaluation") {
  const ExactPolynomial p = parse_polynomial("x1^2 + 3/2*x1*x2 - 0.25*x2^3", 2);
  const std::vector<Rational> x{Rational(1), Rational(2)};
  CHECK(p.evaluate(x) == Rational(2));  // 1 + 3 - 2
  CHECK(parse_polynomial("0.1*x1", 1).terms().front().coeff == Rational(1, 10));
  CHECK(parse_polynomial("1e-3*x1", 1).terms().front().coeff == Rational(1, 1000));
  CHECK(parse_polynomial("(x1 + x2)^2 - x1^2 - x2^2", 2) == parse_polynomial("2*x1*x2", 2));
  CHECK(parse_polynomial("x1*x2/4", 2) == parse_polynomial("0.25*x2*x1", 2));
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_polynomial("x1^", 1), InputError);
  CHECK_THROWS_AS(parse_polynomial("x3", 2), InputError);
  CHECK_THROWS_AS(parse_polynomial("x1/x2", 2), InputError);
  CHECK_THROWS_AS(parse_polynomial("x1^(1/2)", 1), InputError);
  CHECK_THROWS_AS(parse_polynomial("y", 1), InputError);
  CHECK(max_variable_index("x1 + x12*x3") == 12);
}

TEST_CASE("correctly rounded coefficients") {
  CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(Rational(1, 10)) == 0.1);
  CHECK(to_double(Rational(-7, 3)) == -7.0 / 3.0);
  mpq_class big("123456789012345678901234567890/7");
  big.canonicalize();
  CHECK(to_double(big) == doctest::Approx(123456789012345678901234567890.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("derivatives match finite differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const PolyMap f = parse_map({"x1^3*x2 - 2*x2^2*x3 + x1", "x1*x2*x3 + 0.5*x3^4"}, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd x = vec({u(rng), u(rng), u(rng)});
    const Eigen::MatrixXd sym = jacobian(f, x).matrix();
    CHECK((sym - fd_jacobian(f, x)).norm() <= 1e-7 * (1.0 + sym.norm()));
  }
}

TEST_CASE("map validation") {
  CHECK_THROWS_WITH_AS(parse_map({"x1", "x2", "x1*x2"}, 2), doctest::Contains("n >= p required"), InputError);
  CHECK_THROWS_WITH_AS(parse_map({"x1 + 1"}, 1), doctest::Contains("does not vanish"), InputError);
  CHECK_THROWS_AS(eval_map(parse_map({"x1"}, 2), vec({1.0})), InputError);
}

TEST_CASE("jets and truncation") {
  const ExactPolyMap f = parse_exact_map({"x1^2 + x1^3 - x2^4"}, 2);
  CHECK(truncate_jet(f, 2) == parse_exact_map({"x1^2"}, 2));
  CHECK(truncate_jet(f, 3) == parse_exact_map({"x1^2 + x1^3"}, 2));
  CHECK_THROWS_AS(truncate_jet(f, 0), InputError);
  CHECK(f.degree() == 4);
}

TEST_CASE("linear substitution agrees with evaluation") {
  const PolyMap f = parse_map({"x1^2*x2 - x2^3", "x1*x2"}, 2);
  Eigen::MatrixXd a(2, 3);
  a << 1, 2, -1, 0.5, 0, 3;
  const PolyMap g = compose_linear(f, a);
  CHECK(g.n() == 3);
  const Eigen::VectorXd y = vec({0.3, -0.7, 0.2});
  CHECK((eval_map(g, y) - eval_map(f, a * y)).norm() <= 1e-14);
}

TEST_CASE("printing round-trips through the parser") {
  const ExactPolyMap f = parse_exact_map({"x1^2 - 3/2*x1*x2 + 7*x2^5", "-x2"}, 2);
  const auto& c = f.components();
  for (const auto& comp : c) CHECK(parse_polynomial(comp.to_string(), 2) == comp);
}

TEST_CASE("arc components") {
  const PuiseuxPolynomial p = parse_arc_component("t^(3/2) - 2*t^2");
  CHECK(p.evaluate(4.0) == doctest::Approx(8.0 - 32.0));
  CHECK(parse_arc_component("(2*t)^3").evaluate(0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(parse_arc_component("(t + t^2)^(1/2)"), InputError);
}

TEST_CASE("perturbation family") {
  const PolyMap f = parse_map({"x1^2 + x2^2"}, 2);
  const PerturbationFamily fam = make_perturbation_family(f, SigmaSet::origin(2), 2, {-1.0, 1.0});
  CHECK(fam.generators().size() == 4);  // degree-3 monomials in 2 variables
  CHECK(fam.members().size() == 1 + 4 * 2);
  CHECK(fam.members().front().g == f);

  // Sigma = x1-axis: generators only involve the normal coordinate x2.
  Eigen::MatrixXd axis(2, 1);
  axis << 1, 0;
  const SigmaSet line = SigmaSet::linear_subspace(axis);
  const PolyMap f3 = parse_map({"x2^2 + x1*x2"}, 2);
  const PerturbationFamily rel = make_perturbation_family(f3, line, 2, {1.0});
  REQUIRE(rel.generators().size() == 1);
  CHECK(rel.generators().front() == parse_map({"x2^3"}, 2));
  const ShellSample s = sample_shells(line, 0.5, 8, 64, 3);
  CHECK(rel.bound_ratio(s) <= 1.0 + 1e-12);

  const SigmaSet parabola = SigmaSet::polynomial_zero_set({parse_polynomial("x2 - x1^2", 2).cast<double>()});
  CHECK_THROWS_AS(make_perturbation_family(f, parabola, 2, {1.0}), CapabilityError);
}
