#include "jetcheck/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>

namespace jetcheck {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  Rational value;
  std::size_t pos;
};

Rational pow10(long k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(k)));
  return k >= 0 ? Rational(p) : Rational(mpz_class(1), p);
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ >= src_.size()) {
        out.push_back(Token{Tok::End, "", Rational(0), pos_});
        return out;
      }
      const char c = src_[pos_];
      const std::size_t start = pos_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number());
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        out.push_back(Token{Tok::Ident, std::string(src_.substr(start, pos_ - start)), Rational(0), start});
      } else {
        Tok kind;
        switch (c) {
          case '+': kind = Tok::Plus; break;
          case '-': kind = Tok::Minus; break;
          case '*': kind = Tok::Star; break;
          case '/': kind = Tok::Slash; break;
          case '^': kind = Tok::Caret; break;
          case '(': kind = Tok::LParen; break;
          case ')': kind = Tok::RParen; break;
          default:
            throw InputError("unexpected character '" + std::string(1, c) + "' at position " + std::to_string(start));
        }
        ++pos_;
        out.push_back(Token{kind, std::string(1, c), Rational(0), start});
      }
    }
  }

 private:
  Token number() {
    const std::size_t start = pos_;
    mpz_class digits = 0;
    long scale = 0;
    bool any = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      digits = digits * 10 + (src_[pos_++] - '0');
      any = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits = digits * 10 + (src_[pos_++] - '0');
        --scale;
        any = true;
      }
    }
    if (!any) throw InputError("malformed number at position " + std::to_string(start));
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      int sign = 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) {
        if (src_[p] == '-') sign = -1;
        ++p;
      }
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        long e = 0;
        while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
          e = e * 10 + (src_[p++] - '0');
          if (e > 400) throw InputError("exponent too large at position " + std::to_string(start));
        }
        scale += sign * e;
        pos_ = p;
      }
    }
    Rational value = Rational(digits) * pow10(scale);
    value.canonicalize();
    return Token{Tok::Number, std::string(src_.substr(start, pos_ - start)), value, start};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

/// Recursive-descent parser over an algebra A providing constant, variable,
/// add, mul, neg, as_constant and power.
template <class A>
class Parser {
 public:
  using Value = typename A::Value;

  Parser(std::string_view src, const A& algebra) : tokens_(Lexer(src).run()), alg_(algebra) {}

  Value parse() {
    Value v = expr();
    if (peek().kind != Tok::End) fail("unexpected token '" + peek().text + "'");
    return v;
  }

 private:
  const Token& peek() const { return tokens_[idx_]; }
  const Token& next() { return tokens_[idx_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++idx_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(msg + " at position " + std::to_string(peek().pos));
  }

  Value expr() {
    Value acc;
    if (accept(Tok::Minus)) {
      acc = alg_.neg(term());
    } else {
      accept(Tok::Plus);
      acc = term();
    }
    while (true) {
      if (accept(Tok::Plus)) {
        acc = alg_.add(acc, term());
      } else if (accept(Tok::Minus)) {
        acc = alg_.add(acc, alg_.neg(term()));
      } else {
        return acc;
      }
    }
  }

  Value term() {
    Value acc = factor();
    while (true) {
      if (accept(Tok::Star)) {
        acc = alg_.mul(acc, factor());
      } else if (accept(Tok::Slash)) {
        Value d = factor();
        auto c = alg_.as_constant(d);
        if (!c) fail("division is only allowed by a constant");
        if (*c == 0) fail("division by zero");
        acc = alg_.mul(acc, alg_.constant(Rational(1) / *c));
      } else {
        return acc;
      }
    }
  }

  Value factor() {
    if (accept(Tok::Minus)) return alg_.neg(factor());
    Value base = primary();
    if (accept(Tok::Caret)) return alg_.power(base, exponent());
    return base;
  }

  Rational exponent() {
    if (accept(Tok::LParen)) {
      Rational sign = accept(Tok::Minus) ? Rational(-1) : Rational(1);
      if (peek().kind != Tok::Number) fail("expected exponent");
      Rational e = next().value;
      if (accept(Tok::Slash)) {
        if (peek().kind != Tok::Number) fail("expected exponent denominator");
        Rational d = next().value;
        if (d == 0) fail("zero exponent denominator");
        e /= d;
      }
      if (!accept(Tok::RParen)) fail("expected ')' after exponent");
      return sign * e;
    }
    Rational sign = accept(Tok::Minus) ? Rational(-1) : Rational(1);
    if (peek().kind != Tok::Number) fail("expected exponent");
    return sign * next().value;
  }

  Value primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        ++idx_;
        return alg_.constant(t.value);
      case Tok::Ident:
        ++idx_;
        return alg_.variable(t.text, t.pos);
      case Tok::LParen: {
        ++idx_;
        Value v = expr();
        if (!accept(Tok::RParen)) fail("expected ')'");
        return v;
      }
      default:
        fail("unexpected token '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t idx_ = 0;
  const A& alg_;
};

struct PolyAlgebra {
  using Value = ExactPolynomial;
  std::size_t nvars;

  Value constant(const Rational& c) const { return Value::constant(nvars, c); }
  Value variable(const std::string& name, std::size_t pos) const {
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const unsigned long k = std::stoul(name.substr(1));
      if (k >= 1 && k <= nvars) return Value::variable(nvars, k - 1);
      throw InputError("variable " + name + " out of range x1..x" + std::to_string(nvars) + " at position " +
                       std::to_string(pos));
    }
    throw InputError("unknown identifier '" + name + "' at position " + std::to_string(pos) +
                     " (variables are x1..x" + std::to_string(nvars) + ")");
  }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  std::optional<Rational> as_constant(const Value& v) const {
    if (v.is_zero()) return Rational(0);
    if (v.degree() == 0) return v.constant_term();
    return std::nullopt;
  }
  Value power(const Value& base, const Rational& e) const {
    if (e.get_den() != 1 || sgn(e) < 0) throw InputError("polynomial exponents must be non-negative integers");
    if (e > 64) throw InputError("polynomial exponent too large");
    return base.pow(static_cast<unsigned>(e.get_num().get_ui()));
  }
};

struct ArcAlgebra {
  using Value = PuiseuxPolynomial;

  Value constant(const Rational& c) const { return Value::constant(to_double(c)); }
  Value variable(const std::string& name, std::size_t pos) const {
    if (name == "t") return Value::monomial(Rational(1), 1.0);
    throw InputError("unknown identifier '" + name + "' at position " + std::to_string(pos) +
                     " (arc components use the parameter t)");
  }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  std::optional<Rational> as_constant(const Value& v) const {
    if (v.terms().empty()) return Rational(0);
    if (v.terms().size() == 1 && v.terms()[0].exponent == 0) return Rational(v.terms()[0].coeff);
    return std::nullopt;
  }
  Value power(const Value& base, const Rational& e) const { return base.pow(e); }
};

}  // namespace

ExactPolynomial parse_polynomial(std::string_view text, std::size_t nvars) {
  if (nvars == 0) throw InputError("polynomial needs at least one variable");
  PolyAlgebra alg{nvars};
  return Parser<PolyAlgebra>(text, alg).parse();
}

std::size_t max_variable_index(std::string_view text) {
  std::size_t best = 0;
  for (const Token& t : Lexer(text).run()) {
    if (t.kind != Tok::Ident || t.text.size() < 2 || t.text[0] != 'x') continue;
    if (!std::all_of(t.text.begin() + 1, t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      continue;
    best = std::max<std::size_t>(best, std::stoul(t.text.substr(1)));
  }
  return best;
}

PuiseuxPolynomial PuiseuxPolynomial::constant(double c) { return monomial(Rational(0), c); }

PuiseuxPolynomial PuiseuxPolynomial::monomial(const Rational& exponent, double coeff) {
  PuiseuxPolynomial p;
  p.terms_.push_back(Term{exponent, coeff});
  p.normalize();
  return p;
}

double PuiseuxPolynomial::evaluate(double t) const {
  double sum = 0.0;
  for (const auto& term : terms_) {
    if (term.exponent == 0) {
      sum += term.coeff;
    } else {
      sum += term.coeff * std::pow(t, to_double(term.exponent));
    }
  }
  return sum;
}

PuiseuxPolynomial operator+(const PuiseuxPolynomial& a, const PuiseuxPolynomial& b) {
  PuiseuxPolynomial out = a;
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  out.normalize();
  return out;
}

PuiseuxPolynomial operator*(const PuiseuxPolynomial& a, const PuiseuxPolynomial& b) {
  PuiseuxPolynomial out;
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) out.terms_.push_back({s.exponent + t.exponent, s.coeff * t.coeff});
  out.normalize();
  return out;
}

PuiseuxPolynomial PuiseuxPolynomial::operator-() const {
  PuiseuxPolynomial out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

PuiseuxPolynomial PuiseuxPolynomial::pow(const Rational& exponent) const {
  if (exponent.get_den() == 1 && sgn(exponent) >= 0 && exponent <= 64) {
    PuiseuxPolynomial result = constant(1.0);
    const unsigned long k = exponent.get_num().get_ui();
    for (unsigned long i = 0; i < k; ++i) result = result * *this;
    return result;
  }
  if (terms_.size() != 1) throw InputError("fractional or negative powers need a single-term base");
  const Term& t = terms_.front();
  if (t.coeff <= 0.0 && exponent.get_den() != 1) throw InputError("fractional power of a non-positive coefficient");
  return monomial(t.exponent * exponent, std::pow(t.coeff, to_double(exponent)));
}

void PuiseuxPolynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  std::vector<Term> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().exponent == t.exponent) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

std::string PuiseuxPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    std::string c = format_coefficient(t.coeff);
    const bool negative = c.front() == '-';
    if (negative) c.erase(0, 1);
    if (i == 0) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    if (t.exponent == 0) {
      out += c;
      continue;
    }
    if (c != "1") out += c + "*";
    out += "t";
    if (t.exponent != 1) {
      if (t.exponent.get_den() == 1 && sgn(t.exponent) > 0) {
        out += "^" + t.exponent.get_str();
      } else {
        out += "^(" + t.exponent.get_str() + ")";
      }
    }
  }
  return out;
}

PuiseuxPolynomial parse_arc_component(std::string_view text) {
  ArcAlgebra alg;
  return Parser<ArcAlgebra>(text, alg).parse();
}

}  // namespace jetcheck
