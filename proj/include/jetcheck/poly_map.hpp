#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jetcheck/linear_map.hpp"
#include "jetcheck/polynomial.hpp"

namespace jetcheck {

/// Polynomial map germ (R^n,0) -> (R^p,0). Immutable; the partial
/// derivatives are differentiated symbolically once at construction.
template <class Coeff>
class BasicPolyMap {
 public:
  BasicPolyMap(std::size_t n, std::vector<Polynomial<Coeff>> components)
      : n_(n), components_(std::move(components)) {
    if (n_ == 0) throw InputError("domain dimension must be positive");
    if (components_.empty()) throw InputError("map needs at least one component");
    if (components_.size() > n_)
      throw InputError("n >= p required (got n=" + std::to_string(n_) + ", p=" + std::to_string(components_.size()) + ")");
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (components_[i].nvars() != n_) throw InputError("component " + std::to_string(i + 1) + " has the wrong arity");
      if (components_[i].constant_term() != Coeff(0))
        throw InputError("component " + std::to_string(i + 1) + " does not vanish at the origin");
    }
    partials_.reserve(components_.size() * n_);
    for (const auto& c : components_)
      for (std::size_t j = 0; j < n_; ++j) partials_.push_back(c.derivative(j));
  }

  std::size_t n() const { return n_; }
  std::size_t p() const { return components_.size(); }
  const std::vector<Polynomial<Coeff>>& components() const { return components_; }
  const Polynomial<Coeff>& partial(std::size_t i, std::size_t j) const { return partials_[i * n_ + j]; }

  int degree() const {
    int d = -1;
    for (const auto& c : components_) d = std::max(d, c.degree());
    return d;
  }

  std::vector<Coeff> eval(std::span<const Coeff> x) const {
    check_point(x.size());
    std::vector<Coeff> out;
    out.reserve(p());
    for (const auto& c : components_) out.push_back(c.evaluate(x));
    return out;
  }

  std::vector<std::vector<Coeff>> jacobian_entries(std::span<const Coeff> x) const {
    check_point(x.size());
    std::vector<std::vector<Coeff>> out(p(), std::vector<Coeff>(n_));
    for (std::size_t i = 0; i < p(); ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i][j] = partial(i, j).evaluate(x);
    return out;
  }

  BasicPolyMap truncated(int r) const {
    std::vector<Polynomial<Coeff>> out;
    for (const auto& c : components_) out.push_back(c.truncated(r));
    return BasicPolyMap(n_, std::move(out));
  }

  friend BasicPolyMap operator+(const BasicPolyMap& a, const BasicPolyMap& b) {
    if (a.n_ != b.n_ || a.p() != b.p()) throw InputError("maps have different dimensions");
    std::vector<Polynomial<Coeff>> out;
    for (std::size_t i = 0; i < a.p(); ++i) out.push_back(a.components_[i] + b.components_[i]);
    return BasicPolyMap(a.n_, std::move(out));
  }

  friend BasicPolyMap operator-(const BasicPolyMap& a, const BasicPolyMap& b) { return a + b.scaled(Coeff(-1)); }

  BasicPolyMap scaled(const Coeff& c) const {
    std::vector<Polynomial<Coeff>> out;
    for (const auto& comp : components_) out.push_back(c * comp);
    return BasicPolyMap(n_, std::move(out));
  }

  bool operator==(const BasicPolyMap& other) const { return n_ == other.n_ && components_ == other.components_; }

  /// Components joined as "[c1; c2; ...]".
  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (i) out += "; ";
      out += components_[i].to_string();
    }
    return out + "]";
  }

  template <class Other>
  BasicPolyMap<Other> cast() const {
    std::vector<Polynomial<Other>> out;
    for (const auto& c : components_) out.push_back(c.template cast<Other>());
    return BasicPolyMap<Other>(n_, std::move(out));
  }

 private:
  void check_point(std::size_t dim) const {
    if (dim != n_)
      throw InputError("point has dimension " + std::to_string(dim) + ", map expects " + std::to_string(n_));
  }

  std::size_t n_;
  std::vector<Polynomial<Coeff>> components_;
  std::vector<Polynomial<Coeff>> partials_;
};

using PolyMap = BasicPolyMap<double>;
using ExactPolyMap = BasicPolyMap<Rational>;

/// Parses one expression per component in variables x1..xn (exact rationals).
ExactPolyMap parse_exact_map(const std::vector<std::string>& components, std::size_t n);
PolyMap parse_map(const std::vector<std::string>& components, std::size_t n);

Eigen::VectorXd eval_map(const PolyMap& f, const Eigen::VectorXd& x);
std::vector<Rational> eval_map(const ExactPolyMap& f, std::span<const Rational> x);

/// df(x): row i is grad f_i(x), from the symbolic partials.
LinearMap jacobian(const PolyMap& f, const Eigen::VectorXd& x);

/// All monomials of total degree <= r. For Sigma = {0} this is the jet representative.
template <class Coeff>
BasicPolyMap<Coeff> truncate_jet(const BasicPolyMap<Coeff>& f, int r) {
  if (r < 1) throw InputError("jet order must be >= 1");
  return f.truncated(r);
}

/// f o A for an n x m matrix A (the result lives on R^m).
PolyMap compose_linear(const PolyMap& f, const Eigen::MatrixXd& a);

}  // namespace jetcheck
