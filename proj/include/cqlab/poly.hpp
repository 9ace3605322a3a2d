#ifndef CQLAB_POLY_HPP
#define CQLAB_POLY_HPP

#include <map>
#include <vector>

#include "cqlab/vec.hpp"

namespace cqlab {

// ---------------------------------------------------------------------------
// multivariate polynomials with rational coefficients

using Exponents = std::vector<unsigned>;

struct Poly {
  std::size_t nvars = 0;
  std::map<Exponents, Rational> terms;  // zero coefficients never stored

  static Poly constant(std::size_t n, const Rational& c) {
    Poly p;
    p.nvars = n;
    if (c != 0) p.terms[Exponents(n, 0)] = c;
    return p;
  }
  static Poly variable(std::size_t n, std::size_t i) {
    Poly p;
    p.nvars = n;
    Exponents e(n, 0);
    e[i] = 1;
    p.terms[e] = 1;
    return p;
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
      terms[e] = c;
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  bool is_zero() const { return terms.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms) {
      unsigned t = 0;
      for (unsigned k : e) t += k;
      d = std::max(d, t);
    }
    return d;
  }

  Rational eval(const QVec& x) const {
    Rational s = 0;
    for (const auto& [e, c] : terms) {
      Rational m = c;
      for (std::size_t i = 0; i < nvars; ++i)
        for (unsigned k = 0; k < e[i]; ++k) m *= x[i];
      s += m;
    }
    return s;
  }
};

inline Poly operator+(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [e, c] : b.terms) r.add_term(e, c);
  return r;
}

inline Poly operator-(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [e, c] : b.terms) r.add_term(e, -c);
  return r;
}

inline Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  r.nvars = a.nvars;
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      Exponents e(a.nvars);
      for (std::size_t i = 0; i < a.nvars; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

inline Poly operator*(const Rational& t, const Poly& a) {
  Poly r;
  r.nvars = a.nvars;
  for (const auto& [e, c] : a.terms) r.add_term(e, t * c);
  return r;
}

inline Poly pow(const Poly& a, unsigned k) {
  Poly r = Poly::constant(a.nvars, 1);
  for (unsigned i = 0; i < k; ++i) r = r * a;
  return r;
}

inline Poly partial(const Poly& p, std::size_t i) {
  Poly r;
  r.nvars = p.nvars;
  for (const auto& [e, c] : p.terms) {
    if (e[i] == 0) continue;
    Exponents d = e;
    --d[i];
    r.add_term(d, c * Rational(e[i]));
  }
  return r;
}

/// terms of total degree exactly q
inline Poly homogeneous_component(const Poly& p, unsigned q) {
  Poly r;
  r.nvars = p.nvars;
  for (const auto& [e, c] : p.terms) {
    unsigned t = 0;
    for (unsigned k : e) t += k;
    if (t == q) r.add_term(e, c);
  }
  return r;
}

/// shift of origin: p(x0 + x) as a polynomial in x
inline Poly taylor_shift(const Poly& p, const QVec& x0) {
  Poly r;
  r.nvars = p.nvars;
  for (const auto& [e, c] : p.terms) {
    Poly m = Poly::constant(p.nvars, c);
    for (std::size_t i = 0; i < p.nvars; ++i)
      if (e[i] > 0)
        m = m * pow(Poly::variable(p.nvars, i) + Poly::constant(p.nvars, x0[i]),
                    e[i]);
    r = r + m;
  }
  return r;
}

// ---------------------------------------------------------------------------
// univariate polynomials (coefficients low degree -> high)

using UPoly = QVec;

inline void unormalize(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int udeg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

inline Rational ueval(const UPoly& p, const Rational& t) {
  Rational s = 0;
  for (std::size_t i = p.size(); i-- > 0;) s = s * t + p[i];
  return s;
}

inline UPoly uderiv(const UPoly& p) {
  UPoly r;
  for (std::size_t i = 1; i < p.size(); ++i) r.push_back(Rational(i) * p[i]);
  return r;
}

inline UPoly uscale(const Rational& t, UPoly p) {
  for (auto& c : p) c *= t;
  unormalize(p);
  return p;
}

inline UPoly usub(UPoly a, const UPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  unormalize(a);
  return a;
}

/// remainder of a / b (b != 0); quotient optionally returned
inline UPoly urem(UPoly a, const UPoly& b, UPoly* quot = nullptr) {
  unormalize(a);
  if (quot) quot->assign(std::max<std::size_t>(a.size(), 1), Rational(0));
  while (udeg(a) >= udeg(b) && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    if (quot) (*quot)[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    unormalize(a);
  }
  if (quot) unormalize(*quot);
  return a;
}

inline UPoly udiv_exact(const UPoly& a, const UPoly& b) {
  UPoly q;
  urem(a, b, &q);
  return q;
}

/// monic gcd
inline UPoly ugcd(UPoly a, UPoly b) {
  unormalize(a);
  unormalize(b);
  while (!b.empty()) {
    UPoly r = urem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

inline UPoly squarefree_part(const UPoly& p) {
  if (udeg(p) <= 0) return p;
  UPoly g = ugcd(p, uderiv(p));
  if (udeg(g) <= 0) return p;
  return udiv_exact(p, g);
}

/// Yun factorization p = prod f_i^i (content dropped); f[i-1] has multiplicity i
inline std::vector<UPoly> squarefree_factors(const UPoly& p0) {
  UPoly p = p0;
  unormalize(p);
  std::vector<UPoly> out;
  if (udeg(p) <= 0) return out;
  UPoly dp = uderiv(p);
  UPoly g0 = ugcd(p, dp);
  UPoly w = udiv_exact(p, g0);
  UPoly y = udiv_exact(dp, g0);
  while (udeg(w) > 0) {
    UPoly z = usub(y, uderiv(w));
    UPoly fi = ugcd(w, z);
    out.push_back(fi);
    w = udiv_exact(w, fi);
    y = udiv_exact(z, fi);
  }
  return out;
}

inline std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain;
  UPoly a = p;
  unormalize(a);
  if (a.empty()) return chain;
  chain.push_back(a);
  UPoly b = uderiv(a);
  while (!b.empty()) {
    chain.push_back(b);
    UPoly r = urem(chain[chain.size() - 2], b);
    for (auto& c : r) c = -c;
    b = std::move(r);
  }
  return chain;
}

namespace detail {
inline int sturm_variations(const std::vector<UPoly>& chain, const Rational& t) {
  int v = 0, prev = 0;
  for (const auto& q : chain) {
    int s = sign(Rational(ueval(q, t)));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}
inline int sturm_variations_at_inf(const std::vector<UPoly>& chain, int dir) {
  int v = 0, prev = 0;
  for (const auto& q : chain) {
    if (q.empty()) continue;
    int s = sign(q.back());
    if (dir < 0 && udeg(q) % 2 == 1) s = -s;
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}
}  // namespace detail

/// all coefficient magnitudes bounded root radius (Cauchy)
inline Rational root_bound(const UPoly& p) {
  Rational b = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    b = std::max(b, rat_abs(p[i] / p.back()));
  return b + 1;
}

/// distinct real roots of p in (a, b]; pass squarefree input for exactness
inline int count_real_roots(const UPoly& p, const Rational& a, const Rational& b) {
  UPoly sf = squarefree_part(p);
  if (udeg(sf) <= 0) return 0;
  auto chain = sturm_chain(sf);
  return detail::sturm_variations(chain, a) - detail::sturm_variations(chain, b);
}

inline int count_real_roots(const UPoly& p) {
  UPoly sf = squarefree_part(p);
  if (udeg(sf) <= 0) return 0;
  auto chain = sturm_chain(sf);
  return detail::sturm_variations_at_inf(chain, -1) -
         detail::sturm_variations_at_inf(chain, +1);
}

/// Disjoint intervals (a,b] each holding exactly one distinct real root.
inline std::vector<std::pair<Rational, Rational>> isolate_real_roots(const UPoly& p) {
  std::vector<std::pair<Rational, Rational>> out;
  UPoly sf = squarefree_part(p);
  if (udeg(sf) <= 0) return out;
  auto chain = sturm_chain(sf);
  Rational bnd = root_bound(sf);
  auto vars = [&](const Rational& t) { return detail::sturm_variations(chain, t); };
  struct Seg {
    Rational a, b;
    int va, vb;
  };
  std::vector<Seg> work{{-bnd, bnd, vars(-bnd), vars(bnd)}};
  while (!work.empty()) {
    Seg s = work.back();
    work.pop_back();
    int roots = s.va - s.vb;
    if (roots == 0) continue;
    if (roots == 1) {
      out.push_back({s.a, s.b});
      continue;
    }
    Rational m = (s.a + s.b) / 2;
    int vm = vars(m);
    work.push_back({s.a, m, s.va, vm});
    work.push_back({m, s.b, vm, s.vb});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cqlab

#endif
