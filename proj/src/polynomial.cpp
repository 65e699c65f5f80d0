#include "jetcheck/polynomial.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>

namespace jetcheck {

double to_double(const Rational& q) {
  const double truncated = q.get_d();
  if (!std::isfinite(truncated)) return truncated;
  // get_d truncates toward zero; the nearest double is this value or the
  // next one away from zero.
  const double away = std::nextafter(truncated, sgn(q) < 0 ? -std::numeric_limits<double>::infinity()
                                                                : std::numeric_limits<double>::infinity());
  if (!std::isfinite(away)) return truncated;
  const Rational err_trunc = abs(q - Rational(truncated));
  const Rational err_away = abs(q - Rational(away));
  if (err_away < err_trunc) return away;
  if (err_away == err_trunc) {
    // ties to even mantissa
    std::int64_t bits;
    std::memcpy(&bits, &truncated, sizeof bits);
    return (bits & 1) ? away : truncated;
  }
  return truncated;
}

std::string format_coefficient(const Rational& q) { return q.get_str(); }

std::string format_coefficient(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

RealPolynomial compose_linear(const RealPolynomial& p, const Eigen::MatrixXd& a) {
  const std::size_t n = p.nvars();
  if (static_cast<std::size_t>(a.rows()) != n) throw InputError("substitution matrix rows must match polynomial arity");
  const std::size_t m = static_cast<std::size_t>(a.cols());
  std::vector<RealPolynomial> images;
  images.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term<double>> terms;
    for (std::size_t j = 0; j < m; ++j) {
      Exponents e(m, 0);
      e[j] = 1;
      terms.push_back(Term<double>{std::move(e), a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
    images.push_back(RealPolynomial::from_terms(m, std::move(terms)));
  }
  RealPolynomial out(m);
  for (const auto& t : p.terms()) {
    RealPolynomial prod = RealPolynomial::constant(m, t.coeff);
    for (std::size_t i = 0; i < n; ++i)
      if (t.exponents[i] > 0) prod = prod * images[i].pow(static_cast<unsigned>(t.exponents[i]));
    out = out + prod;
  }
  return out;
}

namespace {

void enumerate_monomials(std::size_t var, int remaining, Exponents& cur, std::vector<Exponents>& out) {
  if (var + 1 == cur.size()) {
    cur[var] = remaining;
    out.push_back(cur);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[var] = k;
    enumerate_monomials(var + 1, remaining - k, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Exponents> monomials_of_degree(std::size_t nvars, int degree) {
  std::vector<Exponents> out;
  if (nvars == 0 || degree < 0) return out;
  Exponents cur(nvars, 0);
  enumerate_monomials(0, degree, cur, out);
  return out;
}

}  // namespace jetcheck
