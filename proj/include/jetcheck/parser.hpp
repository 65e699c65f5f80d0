#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "jetcheck/polynomial.hpp"

namespace jetcheck {

/// Parses "x1^2 + 3/2*x1*x2 - 0.25*x2^3" in variables x1..x<nvars>.
/// Decimal and scientific literals are read exactly as rationals.
/// Supported: + - * ( ), division by a constant, ^ with a non-negative
/// integer exponent.
ExactPolynomial parse_polynomial(std::string_view text, std::size_t nvars);

/// Largest k such that the identifier x<k> occurs in text, 0 if none.
std::size_t max_variable_index(std::string_view text);

/// Finite sum c_i t^{e_i} with rational exponents (a truncated Puiseux series).
class PuiseuxPolynomial {
 public:
  struct Term {
    Rational exponent;
    double coeff;
  };

  PuiseuxPolynomial() = default;
  static PuiseuxPolynomial constant(double c);
  static PuiseuxPolynomial monomial(const Rational& exponent, double coeff);

  const std::vector<Term>& terms() const { return terms_; }
  double evaluate(double t) const;

  friend PuiseuxPolynomial operator+(const PuiseuxPolynomial& a, const PuiseuxPolynomial& b);
  friend PuiseuxPolynomial operator*(const PuiseuxPolynomial& a, const PuiseuxPolynomial& b);
  PuiseuxPolynomial operator-() const;
  /// Only single-term bases may take fractional powers.
  PuiseuxPolynomial pow(const Rational& exponent) const;

  std::string to_string() const;

 private:
  void normalize();
  std::vector<Term> terms_;
};

/// Parses an arc component such as "t^(3/2) - 2*t^2" in the parameter t.
PuiseuxPolynomial parse_arc_component(std::string_view text);

}  // namespace jetcheck
