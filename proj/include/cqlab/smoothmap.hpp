#ifndef CQLAB_SMOOTHMAP_HPP
#define CQLAB_SMOOTHMAP_HPP

#include "cqlab/expr.hpp"
#include "cqlab/poly.hpp"

namespace cqlab {

struct OrderCapError : std::runtime_error {
  OrderCapError()
      : std::runtime_error(
            "derivative order above 2 requires a polynomial map") {}
};

/// F : R^n -> R^d with derivative oracles. Components parsed from
/// expressions; function-free components are lowered to exact polynomials.
struct SmoothMap {
  std::size_t n = 0, d = 0;
  std::vector<ExprPtr> components;           // always present
  std::vector<std::optional<Poly>> polys;    // per component, when polynomial

  bool all_polynomial() const {
    for (const auto& p : polys)
      if (!p) return false;
    return true;
  }

  static SmoothMap from_expressions(std::size_t n,
                                    const std::vector<std::string>& srcs) {
    SmoothMap m;
    m.n = n;
    m.d = srcs.size();
    for (const auto& s : srcs) {
      ExprPtr e = parse_expr(s, n);
      m.components.push_back(e);
      m.polys.push_back(lower_polynomial(e, n));
    }
    return m;
  }

  static SmoothMap from_polys(std::size_t n, std::vector<Poly> ps) {
    SmoothMap m;
    m.n = n;
    m.d = ps.size();
    for (auto& p : ps) {
      m.components.push_back(nullptr);
      m.polys.push_back(std::move(p));
    }
    return m;
  }

  /// exact on the polynomial path, dyadic rationalization of doubles otherwise
  QVec eval(const QVec& x) const {
    QVec y(d);
    std::vector<double> xd;
    for (const auto& c : x) xd.push_back(to_double(c));
    for (std::size_t i = 0; i < d; ++i)
      y[i] = polys[i] ? polys[i]->eval(x)
                      : rat_from_double(eval_value(components[i], xd));
    return y;
  }

  std::vector<double> eval_d(const std::vector<double>& x) const {
    std::vector<double> y(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (polys[i]) {
        QVec xq;
        for (double v : x) xq.push_back(rat_from_double(v));
        y[i] = to_double(polys[i]->eval(xq));
      } else {
        y[i] = eval_value(components[i], x);
      }
    }
    return y;
  }

  QMat jacobian(const QVec& xbar) const {
    QMat j(d, QVec(n));
    std::vector<double> xd;
    for (const auto& c : xbar) xd.push_back(to_double(c));
    for (std::size_t i = 0; i < d; ++i) {
      if (polys[i]) {
        for (std::size_t k = 0; k < n; ++k)
          j[i][k] = partial(*polys[i], k).eval(xbar);
      } else {
        Jet2 jet = eval_jet2(components[i], xd);
        for (std::size_t k = 0; k < n; ++k) j[i][k] = rat_from_double(jet.g[k]);
      }
    }
    return j;
  }

  /// Hessian of <lambda, F> at xbar
  QMat hessian_scalarized(const QVec& lambda, const QVec& xbar) const {
    QMat h(n, QVec(n, Rational(0)));
    std::vector<double> xd;
    for (const auto& c : xbar) xd.push_back(to_double(c));
    for (std::size_t i = 0; i < d; ++i) {
      if (lambda[i] == 0) continue;
      if (polys[i]) {
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            h[a][b] += lambda[i] * partial(partial(*polys[i], a), b).eval(xbar);
      } else {
        Jet2 jet = eval_jet2(components[i], xd);
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            h[a][b] += lambda[i] * rat_from_double(jet.h[a][b]);
      }
    }
    return h;
  }

  /// D^alpha <lambda, F>(xbar); orders above 2 need the polynomial path
  Rational higher_partial(const QVec& lambda, const Exponents& alpha,
                          const QVec& xbar) const {
    unsigned order = 0;
    for (unsigned a : alpha) order += a;
    Rational s = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (lambda[i] == 0) continue;
      if (!polys[i] && order >= 3) throw OrderCapError();
      if (polys[i]) {
        Poly p = *polys[i];
        for (std::size_t k = 0; k < n; ++k)
          for (unsigned rep = 0; rep < alpha[k]; ++rep) p = partial(p, k);
        s += lambda[i] * p.eval(xbar);
      } else {
        std::vector<double> xd;
        for (const auto& c : xbar) xd.push_back(to_double(c));
        Jet2 jet = eval_jet2(components[i], xd);
        if (order == 0)
          s += lambda[i] * rat_from_double(jet.v);
        else if (order == 1) {
          for (std::size_t k = 0; k < n; ++k)
            if (alpha[k] == 1) s += lambda[i] * rat_from_double(jet.g[k]);
        } else {  // order 2
          std::vector<std::size_t> vars;
          for (std::size_t k = 0; k < n; ++k)
            for (unsigned rep = 0; rep < alpha[k]; ++rep) vars.push_back(k);
          s += lambda[i] * rat_from_double(jet.h[vars[0]][vars[1]]);
        }
      }
    }
    return s;
  }

  bool is_affine() const {
    for (const auto& p : polys) {
      if (!p) return false;
      if (p->degree() > 1) return false;
    }
    return true;
  }

  /// u -> <lambda, F(xbar + u) - F(xbar)> as an exact polynomial
  /// (polynomial path only)
  Poly scalarized_shift(const QVec& lambda, const QVec& xbar) const {
    Poly g = Poly::constant(n, 0);
    for (std::size_t i = 0; i < d; ++i) {
      if (lambda[i] == 0) continue;
      g = g + lambda[i] * taylor_shift(*polys[i], xbar);
    }
    g.add_term(Exponents(n, 0), -g.eval(QVec(n, Rational(0))));
    return g;
  }
};

}  // namespace cqlab

#endif
