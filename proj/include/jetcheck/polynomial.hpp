#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jetcheck/error.hpp"

namespace jetcheck {

using Rational = mpq_class;
using Exponents = std::vector<int>;

/// Nearest double to q (ties to even), unlike mpq_get_d which truncates.
double to_double(const Rational& q);
inline double to_double(double v) { return v; }

std::string format_coefficient(const Rational& q);
std::string format_coefficient(double v);

inline int total_degree(const Exponents& e) {
  int d = 0;
  for (int k : e) d += k;
  return d;
}

/// Graded lexicographic order: lower total degree first; within a degree,
/// x1 outranks x2 outranks x3..., so x1^2 < x1*x2 < x2^2 in this ordering.
inline bool grlex_less(const Exponents& a, const Exponents& b) {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

template <class Coeff>
struct Term {
  Exponents exponents;
  Coeff coeff;

  bool operator==(const Term& other) const {
    return exponents == other.exponents && coeff == other.coeff;
  }
};

/// Sparse multivariate polynomial with terms kept in canonical grlex order
/// and no zero coefficients. Coeff is double or Rational.
template <class Coeff>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Coeff& c) {
    return from_terms(nvars, {Term<Coeff>{Exponents(nvars, 0), c}});
  }

  static Polynomial variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw InputError("variable index out of range");
    Exponents e(nvars, 0);
    e[index] = 1;
    return from_terms(nvars, {Term<Coeff>{std::move(e), Coeff(1)}});
  }

  static Polynomial monomial(Exponents e, const Coeff& c) {
    const std::size_t n = e.size();
    return from_terms(n, {Term<Coeff>{std::move(e), c}});
  }

  /// Collects like terms, drops zeros and sorts canonically.
  static Polynomial from_terms(std::size_t nvars, std::vector<Term<Coeff>> terms) {
    for (const auto& t : terms) {
      if (t.exponents.size() != nvars) throw InputError("term arity does not match variable count");
      for (int k : t.exponents)
        if (k < 0) throw InputError("negative exponent in polynomial term");
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term<Coeff>& a, const Term<Coeff>& b) { return grlex_less(a.exponents, b.exponents); });
    Polynomial out(nvars);
    for (auto& t : terms) {
      if (!out.terms_.empty() && out.terms_.back().exponents == t.exponents) {
        out.terms_.back().coeff += t.coeff;
      } else {
        out.terms_.push_back(std::move(t));
      }
    }
    std::erase_if(out.terms_, [](const Term<Coeff>& t) { return t.coeff == Coeff(0); });
    return out;
  }

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term<Coeff>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Coeff constant_term() const {
    if (!terms_.empty() && total_degree(terms_.front().exponents) == 0) return terms_.front().coeff;
    return Coeff(0);
  }

  /// -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : total_degree(terms_.back().exponents); }

  /// Lowest total degree among the terms; -1 for the zero polynomial.
  int order() const { return terms_.empty() ? -1 : total_degree(terms_.front().exponents); }

  Coeff evaluate(std::span<const Coeff> x) const {
    if (x.size() != nvars_) throw InputError("point dimension does not match polynomial arity");
    if (terms_.empty()) return Coeff(0);
    // Power tables per variable, then one product per term.
    std::vector<int> max_exp(nvars_, 0);
    for (const auto& t : terms_)
      for (std::size_t i = 0; i < nvars_; ++i) max_exp[i] = std::max(max_exp[i], t.exponents[i]);
    std::vector<std::size_t> offset(nvars_ + 1, 0);
    for (std::size_t i = 0; i < nvars_; ++i) offset[i + 1] = offset[i] + static_cast<std::size_t>(max_exp[i]) + 1;
    std::vector<Coeff> powers(offset[nvars_]);
    for (std::size_t i = 0; i < nvars_; ++i) {
      powers[offset[i]] = Coeff(1);
      for (int k = 1; k <= max_exp[i]; ++k) powers[offset[i] + k] = powers[offset[i] + k - 1] * x[i];
    }
    Coeff sum(0);
    for (const auto& t : terms_) {
      Coeff prod = t.coeff;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (t.exponents[i] != 0) prod *= powers[offset[i] + t.exponents[i]];
      sum += prod;
    }
    return sum;
  }

  Polynomial derivative(std::size_t var) const {
    if (var >= nvars_) throw InputError("derivative variable out of range");
    std::vector<Term<Coeff>> out;
    for (const auto& t : terms_) {
      const int k = t.exponents[var];
      if (k == 0) continue;
      Term<Coeff> d{t.exponents, t.coeff * Coeff(k)};
      d.exponents[var] = k - 1;
      out.push_back(std::move(d));
    }
    return from_terms(nvars_, std::move(out));
  }

  /// Terms of total degree <= max_degree.
  Polynomial truncated(int max_degree) const {
    Polynomial out(nvars_);
    for (const auto& t : terms_)
      if (total_degree(t.exponents) <= max_degree) out.terms_.push_back(t);
    return out;
  }

  Polynomial operator-() const {
    Polynomial out = *this;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_arity(a, b);
    std::vector<Term<Coeff>> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return from_terms(a.nvars_, std::move(all));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_arity(a, b);
    std::vector<Term<Coeff>> all;
    all.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) {
        Exponents e(a.nvars_);
        for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = s.exponents[i] + t.exponents[i];
        all.push_back(Term<Coeff>{std::move(e), s.coeff * t.coeff});
      }
    }
    return from_terms(a.nvars_, std::move(all));
  }

  friend Polynomial operator*(const Coeff& c, const Polynomial& p) {
    std::vector<Term<Coeff>> all = p.terms_;
    for (auto& t : all) t.coeff *= c;
    return from_terms(p.nvars_, std::move(all));
  }

  Polynomial pow(unsigned k) const {
    Polynomial result = constant(nvars_, Coeff(1));
    Polynomial base = *this;
    while (k > 0) {
      if (k & 1u) result = result * base;
      k >>= 1u;
      if (k > 0) base = base * base;
    }
    return result;
  }

  bool operator==(const Polynomial& other) const {
    return nvars_ == other.nvars_ && terms_ == other.terms_;
  }

  template <class Other>
  Polynomial<Other> cast() const {
    std::vector<Term<Other>> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(Term<Other>{t.exponents, convert<Other>(t.coeff)});
    return Polynomial<Other>::from_terms(nvars_, std::move(out));
  }

  /// Canonical text in the same syntax the parser accepts, e.g. "x1^2 - 3/2*x1*x2".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
      std::string c = format_coefficient(t.coeff);
      bool negative = !c.empty() && c.front() == '-';
      if (negative) c.erase(0, 1);
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < nvars_; ++i) {
        const int k = t.exponents[i];
        if (k == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(i + 1);
        if (k > 1) mono += "^" + std::to_string(k);
      }
      if (mono.empty()) {
        out += c;
      } else if (c == "1") {
        out += mono;
      } else {
        out += c + "*" + mono;
      }
    }
    return out;
  }

 private:
  template <class Other, class From>
  static Other convert(const From& v) {
    if constexpr (std::is_same_v<Other, double>) {
      return to_double(v);
    } else {
      return Other(v);
    }
  }

  static void check_arity(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw InputError("polynomials have different variable counts");
  }

  std::size_t nvars_ = 0;
  std::vector<Term<Coeff>> terms_;
};

using RealPolynomial = Polynomial<double>;
using ExactPolynomial = Polynomial<Rational>;

/// p(A y) for an n x m matrix A: substitutes x_i = sum_j A(i,j) y_j.
RealPolynomial compose_linear(const RealPolynomial& p, const Eigen::MatrixXd& a);

/// Every exponent vector of total degree exactly `degree` in `nvars` variables, grlex order.
std::vector<Exponents> monomials_of_degree(std::size_t nvars, int degree);

}  // namespace jetcheck
