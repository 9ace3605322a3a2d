#ifndef CQLAB_EXPR_HPP
#define CQLAB_EXPR_HPP

#include <cctype>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "cqlab/poly.hpp"

namespace cqlab {

struct SyntaxError : std::runtime_error {
  std::size_t offset;
  SyntaxError(const std::string& what, std::size_t off)
      : std::runtime_error(what + " at offset " + std::to_string(off)),
        offset(off) {}
};

struct UnknownFunctionError : std::runtime_error {
  explicit UnknownFunctionError(const std::string& name)
      : std::runtime_error("unknown function: " + name) {}
};

enum class Func { Sin, Cos, Exp };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum Kind { Const, Var, Add, Sub, Mul, Neg, Pow, Apply } kind;
  Rational value;       // Const
  std::size_t var = 0;  // Var
  ExprPtr a, b;
  unsigned power = 0;  // Pow
  Func func = Func::Sin;
};

inline ExprPtr make_const(const Rational& c) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Const;
  e->value = c;
  return e;
}
inline ExprPtr make_var(std::size_t i) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Var;
  e->var = i;
  return e;
}
inline ExprPtr make_node(Expr::Kind k, ExprPtr a, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
inline ExprPtr make_pow(ExprPtr a, unsigned p) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Pow;
  e->a = std::move(a);
  e->power = p;
  return e;
}
inline ExprPtr make_apply(Func f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Apply;
  e->a = std::move(a);
  e->func = f;
  return e;
}

// ---------------------------------------------------------------------------
// recursive-descent parser over identifiers x1..xn

namespace detail {

struct Parser {
  const std::string& src;
  std::size_t pos = 0;
  std::size_t nvars;

  explicit Parser(const std::string& s, std::size_t n) : src(s), nvars(n) {}

  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return pos < src.size() ? src[pos] : '\0';
  }

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos != src.size()) throw SyntaxError("unexpected trailing input", pos);
    return e;
  }

  ExprPtr expr() {
    skip();
    bool neg = false;
    if (eat('-')) neg = true;
    ExprPtr e = term();
    if (neg) e = make_node(Expr::Neg, e);
    for (;;) {
      if (eat('+'))
        e = make_node(Expr::Add, e, term());
      else if (eat('-'))
        e = make_node(Expr::Sub, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (eat('*')) e = make_node(Expr::Mul, e, factor());
    return e;
  }

  ExprPtr factor() {
    ExprPtr e = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        ++pos;
      if (pos == start) throw SyntaxError("expected integer exponent", start);
      e = make_pow(e, static_cast<unsigned>(std::stoul(src.substr(start, pos - start))));
    }
    return e;
  }

  ExprPtr atom() {
    skip();
    std::size_t start = pos;
    if (pos >= src.size()) throw SyntaxError("unexpected end of input", pos);
    char c = src[pos];
    if (c == '(') {
      ++pos;
      ExprPtr e = expr();
      if (!eat(')')) throw SyntaxError("expected ')'", pos);
      return e;
    }
    if (c == '-') {
      ++pos;
      return make_node(Expr::Neg, atom());
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[pos])) ||
              src[pos] == '.' || src[pos] == '/'))
        ++pos;
      auto r = rat_parse(src.substr(start, pos - start));
      if (!r) throw SyntaxError("bad numeric literal", start);
      return make_const(*r);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      std::string name = src.substr(start, pos - start);
      if (name.size() >= 2 && name[0] == 'x' &&
          name.find_first_not_of("0123456789", 1) == std::string::npos) {
        std::size_t idx = std::stoul(name.substr(1));
        if (idx < 1 || idx > nvars)
          throw SyntaxError("variable index out of range", start);
        return make_var(idx - 1);
      }
      if (peek() == '(') {
        Func f;
        if (name == "sin")
          f = Func::Sin;
        else if (name == "cos")
          f = Func::Cos;
        else if (name == "exp")
          f = Func::Exp;
        else
          throw UnknownFunctionError(name);
        eat('(');
        ExprPtr arg = expr();
        if (!eat(')')) throw SyntaxError("expected ')'", pos);
        return make_apply(f, arg);
      }
      throw SyntaxError("unknown identifier '" + name + "'", start);
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
  }
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& src, std::size_t nvars) {
  detail::Parser p(src, nvars);
  return p.parse();
}

/// Lowers a function-free AST to an exact polynomial; nullopt if it uses
/// sin/cos/exp.
inline std::optional<Poly> lower_polynomial(const ExprPtr& e, std::size_t nvars) {
  switch (e->kind) {
    case Expr::Const:
      return Poly::constant(nvars, e->value);
    case Expr::Var:
      return Poly::variable(nvars, e->var);
    case Expr::Neg: {
      auto a = lower_polynomial(e->a, nvars);
      if (!a) return std::nullopt;
      return Rational(-1) * *a;
    }
    case Expr::Add:
    case Expr::Sub:
    case Expr::Mul: {
      auto a = lower_polynomial(e->a, nvars);
      auto b = lower_polynomial(e->b, nvars);
      if (!a || !b) return std::nullopt;
      if (e->kind == Expr::Add) return *a + *b;
      if (e->kind == Expr::Sub) return *a - *b;
      return *a * *b;
    }
    case Expr::Pow: {
      auto a = lower_polynomial(e->a, nvars);
      if (!a) return std::nullopt;
      return pow(*a, e->power);
    }
    case Expr::Apply:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// order-2 forward differentiation (value, gradient, Hessian) in double

struct Jet2 {
  double v = 0;
  std::vector<double> g;               // size n
  std::vector<std::vector<double>> h;  // n x n

  explicit Jet2(std::size_t n)
      : g(n, 0.0), h(n, std::vector<double>(n, 0.0)) {}
};

namespace detail {

inline Jet2 jet_binary(const Jet2& a, const Jet2& b, int op) {
  std::size_t n = a.g.size();
  Jet2 r(n);
  if (op == 0 || op == 1) {  // add / sub
    double s = op == 0 ? 1.0 : -1.0;
    r.v = a.v + s * b.v;
    for (std::size_t i = 0; i < n; ++i) {
      r.g[i] = a.g[i] + s * b.g[i];
      for (std::size_t j = 0; j < n; ++j) r.h[i][j] = a.h[i][j] + s * b.h[i][j];
    }
  } else {  // mul
    r.v = a.v * b.v;
    for (std::size_t i = 0; i < n; ++i) {
      r.g[i] = a.g[i] * b.v + a.v * b.g[i];
      for (std::size_t j = 0; j < n; ++j)
        r.h[i][j] = a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] +
                    a.v * b.h[i][j];
    }
  }
  return r;
}

inline Jet2 jet_chain(const Jet2& a, double f, double df, double ddf) {
  std::size_t n = a.g.size();
  Jet2 r(n);
  r.v = f;
  for (std::size_t i = 0; i < n; ++i) {
    r.g[i] = df * a.g[i];
    for (std::size_t j = 0; j < n; ++j)
      r.h[i][j] = df * a.h[i][j] + ddf * a.g[i] * a.g[j];
  }
  return r;
}

}  // namespace detail

inline Jet2 eval_jet2(const ExprPtr& e, const std::vector<double>& x) {
  std::size_t n = x.size();
  switch (e->kind) {
    case Expr::Const: {
      Jet2 r(n);
      r.v = to_double(e->value);
      return r;
    }
    case Expr::Var: {
      Jet2 r(n);
      r.v = x[e->var];
      r.g[e->var] = 1.0;
      return r;
    }
    case Expr::Neg: {
      Jet2 a = eval_jet2(e->a, x);
      return detail::jet_chain(a, -a.v, -1.0, 0.0);
    }
    case Expr::Add:
      return detail::jet_binary(eval_jet2(e->a, x), eval_jet2(e->b, x), 0);
    case Expr::Sub:
      return detail::jet_binary(eval_jet2(e->a, x), eval_jet2(e->b, x), 1);
    case Expr::Mul:
      return detail::jet_binary(eval_jet2(e->a, x), eval_jet2(e->b, x), 2);
    case Expr::Pow: {
      Jet2 a = eval_jet2(e->a, x);
      unsigned k = e->power;
      double f = std::pow(a.v, k);
      double df = k >= 1 ? k * std::pow(a.v, k - 1) : 0.0;
      double ddf = k >= 2 ? double(k) * (k - 1) * std::pow(a.v, k - 2) : 0.0;
      return detail::jet_chain(a, f, df, ddf);
    }
    case Expr::Apply: {
      Jet2 a = eval_jet2(e->a, x);
      switch (e->func) {
        case Func::Sin:
          return detail::jet_chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v));
        case Func::Cos:
          return detail::jet_chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
        case Func::Exp: {
          double ev = std::exp(a.v);
          return detail::jet_chain(a, ev, ev, ev);
        }
      }
    }
  }
  return Jet2(n);
}

inline double eval_value(const ExprPtr& e, const std::vector<double>& x) {
  switch (e->kind) {
    case Expr::Const:
      return to_double(e->value);
    case Expr::Var:
      return x[e->var];
    case Expr::Neg:
      return -eval_value(e->a, x);
    case Expr::Add:
      return eval_value(e->a, x) + eval_value(e->b, x);
    case Expr::Sub:
      return eval_value(e->a, x) - eval_value(e->b, x);
    case Expr::Mul:
      return eval_value(e->a, x) * eval_value(e->b, x);
    case Expr::Pow:
      return std::pow(eval_value(e->a, x), e->power);
    case Expr::Apply: {
      double a = eval_value(e->a, x);
      switch (e->func) {
        case Func::Sin:
          return std::sin(a);
        case Func::Cos:
          return std::cos(a);
        case Func::Exp:
          return std::exp(a);
      }
    }
  }
  return 0;
}

}  // namespace cqlab

#endif
