#include <doctest.h>

#include <cmath>
#include <random>

#include "jetcheck/functionals.hpp"

using namespace jetcheck;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int p, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(p, n);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

// Distance from a to the line spanned by b, from the Pythagorean identity.
double line_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double bb = b.squaredNorm();
  if (bb == 0.0) return a.norm();
  const double ab = a.dot(b);
  return std::sqrt(std::max(0.0, a.squaredNorm() - ab * ab / bb));
}

// Smallest singular value of a 2 x n matrix from the 2 x 2 characteristic polynomial.
double nu_2xn(const Eigen::MatrixXd& t) {
  const Eigen::Matrix2d g = t * t.transpose();
  const double tr = g.trace(), det = g.determinant();
  return std::sqrt(std::max(0.0, (tr - std::sqrt(std::max(0.0, tr * tr - 4 * det))) / 2));
}

}  // namespace

TEST_CASE("kuo distance, closed forms") {
  CHECK(kuo_distance(LinearMap(Eigen::MatrixXd::Identity(3, 3))) == doctest::Approx(1.0));
  Eigen::MatrixXd row(1, 2);
  row << 3, 4;
  CHECK(kuo_distance(LinearMap(row)) == doctest::Approx(5.0));
  Eigen::MatrixXd dep(2, 3);
  dep << 1, 2, 3, 2, 4, 6;
  CHECK(kuo_distance(LinearMap(dep)) == doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd m = random_matrix(rng, 2, 2 + trial % 4);
    const double oracle = std::min(line_distance(m.row(0).transpose(), m.row(1).transpose()),
                                   line_distance(m.row(1).transpose(), m.row(0).transpose()));
    CHECK(kuo_distance(LinearMap(m)) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("rabier nu against the characteristic polynomial") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd m = random_matrix(rng, 2, 2 + trial % 4);
    CHECK(rabier_nu(LinearMap(m)) == doctest::Approx(nu_2xn(m)).epsilon(1e-9));
  }
  // Sampled infimum over the unit circle is an upper bound that is nearly tight.
  const Eigen::MatrixXd m = random_matrix(rng, 2, 3);
  double sampled = 1e300;
  for (int k = 0; k < 20000; ++k) {
    const double th = 2 * M_PI * k / 20000.0;
    sampled = std::min(sampled, (m.transpose() * Eigen::Vector2d(std::cos(th), std::sin(th))).norm());
  }
  CHECK(rabier_nu(LinearMap(m)) <= sampled + 1e-12);
  CHECK(rabier_nu(LinearMap(m)) == doctest::Approx(sampled).epsilon(1e-6));
}

TEST_CASE("eta and eta tilde") {
  Eigen::MatrixXd row(1, 2);
  row << 3, 4;
  CHECK(eta(LinearMap(row)) == doctest::Approx(5.0));
  CHECK(eta(LinearMap(Eigen::MatrixXd::Identity(2, 2))) == doctest::Approx(std::sqrt(0.5)));
  CHECK(eta(LinearMap(Eigen::MatrixXd::Zero(2, 3))) == 0.0);
  CHECK(eta_tilde(LinearMap(Eigen::MatrixXd::Zero(2, 3))) == 0.0);
  CHECK(eta_tilde(LinearMap(Eigen::MatrixXd::Identity(2, 2))) == doctest::Approx(1.0));
  CHECK_THROWS_AS(eta(LinearMap(Eigen::MatrixXd::Ones(20, 40))), CapabilityError);
}

TEST_CASE("sandwich inequalities on random matrices") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 6;
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const LinearMap t(random_matrix(rng, p, n));
    const double k = kuo_distance(t), v = rabier_nu(t), e = eta(t);
    const double sp = std::sqrt(static_cast<double>(p));
    CHECK(v <= k * (1 + 1e-9) + 1e-15);
    CHECK(k <= sp * v * (1 + 1e-9) + 1e-15);
    CHECK(e <= k * (1 + 1e-9) + 1e-15);
    CHECK(k <= sp * e * (1 + 1e-9) + 1e-15);
  }
}

TEST_CASE("gram determinant and minor sums") {
  CHECK(gram_det(Eigen::MatrixXd(3, 0)) == 1.0);
  CHECK(gram_det(Eigen::MatrixXd::Ones(2, 3)) == 0.0);
  Eigen::MatrixXd orth(3, 2);
  orth << 2, 0, 0, 3, 0, 0;
  CHECK(gram_det(orth) == doctest::Approx(36.0));

  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd m = random_matrix(rng, 1 + trial % 3, 3 + trial % 3);
    const double oracle = (m * m.transpose()).determinant();
    CHECK(gram_det(m.transpose()) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(squared_minor_sum(LinearMap(m)) == doctest::Approx(oracle).epsilon(1e-9));
  }
  const PolyMap f = parse_map({"x1^2 + x2*x3", "x3^3 - x1"}, 3);
  Eigen::Vector3d x(0.3, -0.2, 0.7);
  const Eigen::MatrixXd df = jacobian(f, x).matrix();
  CHECK(jacobian_minor_sum(f, x) == doctest::Approx(gram_det(df.transpose())).epsilon(1e-12));
}

TEST_CASE("gram ratio and dual application") {
  Eigen::MatrixXd row(1, 3);
  row << 1, 2, 2;
  CHECK(gram_ratio(LinearMap(row)) == doctest::Approx(3.0));
  CHECK(gram_ratio(LinearMap(Eigen::MatrixXd::Zero(2, 2))) == 0.0);

  std::mt19937_64 rng(15);
  const LinearMap t(random_matrix(rng, 2, 4));
  Eigen::Vector2d y(0.6, 0.8);
  CHECK(dual_apply(t, y) == doctest::Approx((t.matrix().transpose() * y).norm()));
  CHECK(dual_apply(t, y) >= rabier_nu(t) - 1e-14);
  CHECK_THROWS_AS(dual_apply(t, Eigen::Vector2d(1.0, 1.0)), InputError);
  CHECK_THROWS_AS(dual_apply(t, Eigen::Vector3d(1.0, 0.0, 0.0)), InputError);
}

TEST_CASE("linear map validation") {
  CHECK_THROWS_AS((void)LinearMap(Eigen::MatrixXd::Ones(3, 2)), InputError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(1, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS((void)LinearMap(bad), InputError);
  CHECK(binomial(5, 2) == 10);
  CHECK(index_subsets(4, 2).size() == 6);
}
