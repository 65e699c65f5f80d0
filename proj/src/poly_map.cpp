#include "jetcheck/poly_map.hpp"

#include "jetcheck/parser.hpp"

namespace jetcheck {

double LinearMap::operator_norm() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m_);
  return svd.singularValues()(0);
}

ExactPolyMap parse_exact_map(const std::vector<std::string>& components, std::size_t n) {
  std::vector<ExactPolynomial> polys;
  polys.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    try {
      polys.push_back(parse_polynomial(components[i], n));
    } catch (const InputError& e) {
      throw InputError("component " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return ExactPolyMap(n, std::move(polys));
}

PolyMap parse_map(const std::vector<std::string>& components, std::size_t n) {
  return parse_exact_map(components, n).cast<double>();
}

Eigen::VectorXd eval_map(const PolyMap& f, const Eigen::VectorXd& x) {
  const auto values = f.eval(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<Rational> eval_map(const ExactPolyMap& f, std::span<const Rational> x) { return f.eval(x); }

LinearMap jacobian(const PolyMap& f, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != f.n())
    throw InputError("point has dimension " + std::to_string(x.size()) + ", map expects " + std::to_string(f.n()));
  const std::span<const double> pt(x.data(), static_cast<std::size_t>(x.size()));
  Eigen::MatrixXd m(static_cast<Eigen::Index>(f.p()), static_cast<Eigen::Index>(f.n()));
  for (std::size_t i = 0; i < f.p(); ++i)
    for (std::size_t j = 0; j < f.n(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f.partial(i, j).evaluate(pt);
  return LinearMap(std::move(m));
}

PolyMap compose_linear(const PolyMap& f, const Eigen::MatrixXd& a) {
  std::vector<RealPolynomial> out;
  for (const auto& c : f.components()) out.push_back(compose_linear(c, a));
  return PolyMap(static_cast<std::size_t>(a.cols()), std::move(out));
}

}  // namespace jetcheck
