#include <doctest.h>

#include <cmath>

#include "jetcheck/conditions.hpp"
#include "jetcheck/parser.hpp"

using namespace jetcheck;

namespace {

SigmaSet axis_sigma(int n, int axis) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 1);
  b(axis, 0) = 1.0;
  return SigmaSet::linear_subspace(b);
}

struct Setup {
  PolyMap f;
  SigmaSet sigma;
  int r;
  ShellSample sample;
};

Setup make(const std::vector<std::string>& f, const SigmaSet& sigma, int r, int m = 128, std::uint64_t seed = 1) {
  return {parse_map(f, sigma.ambient_dim()), sigma, r, sample_shells(sigma, 0.5, 12, m, seed)};
}

}  // namespace

TEST_CASE("K on the canonical germs") {
  const Setup pos = make({"x1^2 + x2^2"}, SigmaSet::origin(2), 2);
  const ConditionVerdict v = check_K(pos.f, pos.sigma, pos.r, pos.sample);
  CHECK(v.status == Status::Holds);
  REQUIRE(v.margin);
  CHECK(*v.margin == doctest::Approx(2.0).epsilon(1e-9));  // kappa = 2d exactly
  CHECK(*v.estimate.slope == doctest::Approx(1.0).epsilon(1e-3));

  const Setup neg = make({"x1^2"}, SigmaSet::origin(2), 2);
  const ConditionVerdict w = check_K(neg.f, neg.sigma, neg.r, neg.sample);
  CHECK(w.status == Status::Fails);
  REQUIRE(!w.witnesses.empty());
  const auto& x = w.witnesses.front().x;
  CHECK(std::abs(x[0]) <= 1e-3 * std::hypot(x[0], x[1]));

  const Setup rel = make({"x1^3"}, axis_sigma(2, 1), 3);
  const ConditionVerdict u = check_K(rel.f, rel.sigma, rel.r, rel.sample);
  CHECK(u.status == Status::Holds);
  CHECK(*u.margin >= 2.9);  // kappa = 3 x1^2 = 3 d^2
}

TEST_CASE("equivalent forms agree on the canonical germs") {
  const Setup pos = make({"x1^2 + x2^2"}, SigmaSet::origin(2), 2);
  const Setup neg = make({"x1^2"}, SigmaSet::origin(2), 2);
  for (auto check : {check_K_tilde, check_gram3, check_dual4}) {
    const ConditionVerdict a = check(pos.f, pos.sigma, pos.r, pos.sample, {});
    CHECK(a.status == Status::Holds);
    CHECK(*a.margin == doctest::Approx(3.0).epsilon(1e-9));  // 2d^2 + d^2
    CHECK(check(neg.f, neg.sigma, neg.r, neg.sample, {}).status == Status::Fails);
  }
  // For p = 1 the Gram ratio is the gradient norm, so gram3 and K_tilde see the same numbers.
  const Setup gen = make({"x1^2 - x1*x2 + 3*x2^3"}, SigmaSet::origin(2), 2);
  const auto a = check_K_tilde(gen.f, gen.sigma, gen.r, gen.sample);
  const auto b = check_gram3(gen.f, gen.sigma, gen.r, gen.sample);
  REQUIRE(a.estimate.per_shell_infima.size() == b.estimate.per_shell_infima.size());
  for (std::size_t k = 0; k < a.estimate.per_shell_infima.size(); ++k)
    CHECK(*a.estimate.per_shell_infima[k].infimum ==
          doctest::Approx(*b.estimate.per_shell_infima[k].infimum).epsilon(1e-9));
}

TEST_CASE("submersions") {
  const Setup s = make({"x1", "x2"}, SigmaSet::origin(2), 1);
  const auto d = check_dual4(s.f, s.sigma, 1, s.sample);
  CHECK(d.status == Status::Holds);
  CHECK(*d.margin >= 1.0 - 1e-12);
  CHECK(check_KZ(s.f, s.sigma, 1, s.sample).status == Status::Holds);
  CHECK(check_singular_containment(s.f, s.sigma, 1, s.sample).status == Status::Holds);
}

TEST_CASE("KZ pair") {
  const Setup a = make({"x1^2"}, SigmaSet::origin(1), 2);
  const auto h = check_KZ(a.f, a.sigma, 2, a.sample);
  CHECK(h.status == Status::Holds);
  CHECK(*h.estimate.slope == doctest::Approx(-1.0).epsilon(0.05));
  const Setup b = make({"x1^3"}, SigmaSet::origin(1), 2);
  const auto f = check_KZ(b.f, b.sigma, 2, b.sample);
  CHECK(f.status == Status::Fails);
  CHECK(std::abs(*f.estimate.slope) <= 0.02);
}

TEST_CASE("certificate") {
  const Setup pos = make({"x1^2 + x2^2"}, SigmaSet::origin(2), 2);
  const auto v = check_certificate(pos.f, pos.sigma, 2, pos.sample);
  CHECK(v.status == Status::Holds);
  CHECK(*v.delta_hat == doctest::Approx(1.0).epsilon(0.05));
  for (int k = 2; k <= 6; ++k) {
    const Setup mono = make({"x1^" + std::to_string(k)}, SigmaSet::origin(1), k);
    const auto c = check_certificate(mono.f, mono.sigma, k, mono.sample);
    CHECK(*c.estimate.slope == doctest::Approx(k).epsilon(0.05 / k));
    const auto top = check_certificate(mono.f, mono.sigma, k - 1, mono.sample);
    CHECK(top.status == Status::Fails);  // slope exactly r + 1
  }
  const Setup tie = make({"x1^3"}, axis_sigma(2, 1), 2);
  CHECK(check_certificate(tie.f, tie.sigma, 2, tie.sample).status != Status::Holds);
}

TEST_CASE("family-relative checks") {
  const Setup pos = make({"x1^2 + x2^2"}, SigmaSet::origin(2), 2);
  const PerturbationFamily fam = make_perturbation_family(pos.f, pos.sigma, 2, {-1.0, 1.0});
  const auto kd = check_K_delta(pos.f, pos.sigma, 2, fam, pos.sample);
  CHECK(kd.status == Status::Holds);
  const auto ktd = check_K_tilde_delta(pos.f, pos.sigma, 2, fam, pos.sample);
  CHECK(ktd.status == Status::Holds);
  CHECK(*ktd.delta_hat == doctest::Approx(1.0).epsilon(0.06));
  CHECK(ktd.regressions.size() == 2 * fam.members().size());

  const Setup cube = make({"x1^3"}, SigmaSet::origin(1), 2);
  const PerturbationFamily cf = make_perturbation_family(cube.f, cube.sigma, 2, {-1.0, 1.0});
  const auto c = check_K_delta(cube.f, cube.sigma, 2, cf, cube.sample);
  CHECK(c.status == Status::Fails);
  CHECK(*c.estimate.slope == doctest::Approx(2.0).epsilon(0.01));

  const Setup neg = make({"x1^2"}, SigmaSet::origin(2), 2);
  const PerturbationFamily nf = make_perturbation_family(neg.f, neg.sigma, 2, {-1.0, 1.0});
  CHECK(check_K_tilde_delta(neg.f, neg.sigma, 2, nf, neg.sample).status == Status::Fails);
  CHECK(check_K_delta(neg.f, neg.sigma, 2, nf, neg.sample).status == Status::Fails);
}

TEST_CASE("singular containment") {
  const Setup pos = make({"x1^2 + x2^2"}, SigmaSet::origin(2), 2);
  CHECK(check_singular_containment(pos.f, pos.sigma, 2, pos.sample).status == Status::Holds);
  const Setup neg = make({"x1^2"}, SigmaSet::origin(2), 2);
  const auto v = check_singular_containment(neg.f, neg.sigma, 2, neg.sample);
  CHECK(v.status == Status::Fails);
  REQUIRE(!v.witnesses.empty());
  CHECK(v.witnesses.front().distance > 1e-6);
}

TEST_CASE("scaling f scales margins but keeps statuses") {
  const Setup a = make({"x1^2 - x1*x2 + 2*x2^2"}, SigmaSet::origin(2), 2);
  const PolyMap scaled = a.f.scaled(3.0);
  // The horn of K scales with f, so its width is scaled along.
  Thresholds wide;
  wide.w_bar = 3.0;
  const auto k1 = check_K(a.f, a.sigma, 2, a.sample);
  const auto k3 = check_K(scaled, a.sigma, 2, a.sample, wide);
  CHECK(k1.status == k3.status);
  CHECK(*k3.margin == doctest::Approx(3.0 * *k1.margin).epsilon(1e-6));
  for (auto check : {check_K_tilde, check_gram3, check_dual4}) {
    const auto v = check(a.f, a.sigma, 2, a.sample, {});
    const auto w = check(scaled, a.sigma, 2, a.sample, {});
    CHECK(v.status == w.status);
    CHECK(*w.margin == doctest::Approx(3.0 * *v.margin).epsilon(1e-6));
  }
}

TEST_CASE("an empty horn makes K vacuous") {
  const Setup a = make({"3*x1^2 + 3*x2^2"}, SigmaSet::origin(2), 2);
  const auto v = check_K(a.f, a.sigma, 2, a.sample);
  CHECK(v.status == Status::Holds);
  CHECK(v.estimate.usable_shells == 0);
}

TEST_CASE("input validation") {
  const Setup a = make({"x1^2"}, SigmaSet::origin(2), 2);
  CHECK_THROWS_AS(check_K(a.f, SigmaSet::origin(3), 2, a.sample), InputError);
  CHECK_THROWS_AS(check_K(a.f, a.sigma, 0, a.sample), InputError);
  CHECK(parse_condition_tag("K_tilde_delta") == ConditionTag::KTildeDelta);
  CHECK(!parse_condition_tag("nope"));
}
