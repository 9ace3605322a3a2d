#ifndef CQLAB_SIGNFORMS_HPP
#define CQLAB_SIGNFORMS_HPP

#include <optional>
#include <random>
#include <stdexcept>

#include "cqlab/poly.hpp"
#include "cqlab/vec.hpp"

namespace cqlab {

struct BasisDependentError : std::runtime_error {
  BasisDependentError() : std::runtime_error("subspace basis is linearly dependent") {}
};

enum class SignOutcome {
  AlwaysNonpositive,
  AlwaysNegativeOffOrigin,
  Violated,
  Undecided
};

struct SignDecision {
  SignOutcome outcome;
  QVec witness;  // p(witness) > 0 exactly, when Violated
};

enum class Definiteness { PD, PSD, NotPsd };

struct PsdResult {
  Definiteness kind;
  QVec witness;  // x with x^T M x < 0, when NotPsd
};

/// Exact PSD/PD classification of a symmetric matrix via pivoted symmetric
/// elimination with witness back-substitution.
inline PsdResult classify_psd(const QMat& m0) {
  std::size_t n = m0.size();
  QMat m = m0;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  bool strictly = true;
  // records of pivots (in current local coordinates) for witness lifting
  struct Pivot {
    std::size_t local;   // pivot position within the then-active index set
    QVec col;            // pivot column over the remaining entries
    Rational diag;
  };
  std::vector<Pivot> pivots;
  std::vector<std::vector<std::size_t>> maps;  // active->original at each level

  auto lift = [&](QVec y, std::size_t level) {
    // y lives in the active set after `level` pivots; undo them in reverse
    for (std::size_t k = level; k-- > 0;) {
      const Pivot& pv = pivots[k];
      Rational s = 0;
      for (std::size_t j = 0; j < y.size(); ++j) s += pv.col[j] * y[j];
      QVec z(y.size() + 1);
      for (std::size_t j = 0, t = 0; j < z.size(); ++j)
        z[j] = (j == pv.local) ? -s / pv.diag : y[t++];
      y = std::move(z);
    }
    QVec x(n, Rational(0));
    for (std::size_t j = 0; j < y.size(); ++j) x[maps[0][j]] = y[j];
    return x;
  };

  maps.push_back(idx);
  std::vector<std::size_t> act = idx;
  while (!act.empty()) {
    std::size_t k = act.size();
    // negative diagonal: immediate witness
    for (std::size_t i = 0; i < k; ++i)
      if (m[i][i] < 0) {
        QVec y(k, Rational(0));
        y[i] = 1;
        return {Definiteness::NotPsd, lift(std::move(y), pivots.size())};
      }
    std::size_t piv = k;
    for (std::size_t i = 0; i < k; ++i)
      if (m[i][i] > 0) {
        piv = i;
        break;
      }
    if (piv == k) {  // whole diagonal zero
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
          if (m[i][j] != 0) {
            QVec y(k, Rational(0));
            y[i] = 1;
            y[j] = m[i][j] > 0 ? Rational(-1) : Rational(1);
            return {Definiteness::NotPsd, lift(std::move(y), pivots.size())};
          }
      strictly = false;  // zero block of positive dimension
      break;
    }
    // Schur complement w.r.t. pivot
    Pivot rec;
    rec.local = piv;
    rec.diag = m[piv][piv];
    QMat next(k - 1, QVec(k - 1));
    std::vector<std::size_t> nact;
    QVec col;
    for (std::size_t i = 0; i < k; ++i)
      if (i != piv) {
        col.push_back(m[i][piv]);
        nact.push_back(act[i]);
      }
    rec.col = col;
    for (std::size_t i = 0, a = 0; i < k; ++i) {
      if (i == piv) continue;
      for (std::size_t j = 0, b = 0; j < k; ++j) {
        if (j == piv) continue;
        next[a][b] = m[i][j] - m[i][piv] * m[piv][j] / rec.diag;
        ++b;
      }
      ++a;
    }
    pivots.push_back(std::move(rec));
    maps.push_back(nact);
    act = std::move(nact);
    m = std::move(next);
  }
  return {strictly && n > 0 ? Definiteness::PD
                            : (n == 0 ? Definiteness::PD : Definiteness::PSD),
          {}};
}

enum class SubspaceClass { NSD, ND, Indefinite };

struct NsdResult {
  SubspaceClass kind;
  QVec witness;  // x in the subspace with x^T Q x > 0, when Indefinite
};

/// Classifies q(x) = x^T Q x restricted to span(basis).
inline NsdResult nsd_on_subspace(const QMat& q, const QMat& basis) {
  if (!basis.empty() && rank(basis) < basis.size()) throw BasisDependentError();
  if (basis.empty()) return {SubspaceClass::ND, {}};
  std::size_t k = basis.size();
  QMat m(k, QVec(k));
  for (std::size_t i = 0; i < k; ++i) {
    QVec qb = mat_vec(q, basis[i]);
    for (std::size_t j = 0; j < k; ++j) m[i][j] = dot(basis[j], qb);
  }
  QMat neg(k, QVec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) neg[i][j] = -m[i][j];
  PsdResult r = classify_psd(neg);
  if (r.kind == Definiteness::PD) return {SubspaceClass::ND, {}};
  if (r.kind == Definiteness::PSD) return {SubspaceClass::NSD, {}};
  QVec x(basis[0].size(), Rational(0));
  for (std::size_t i = 0; i < k; ++i) x = x + r.witness[i] * basis[i];
  return {SubspaceClass::Indefinite, std::move(x)};
}

namespace detail {

/// decide g(t) <= 0 for all real t (strict: g(t) < 0 for all t);
/// when violated, produce rational t with g(t) > 0
struct UniSignResult {
  bool holds = false;
  std::optional<Rational> violation;  // t with g(t) > 0
};

inline std::optional<Rational> find_positive_point(const UPoly& g) {
  // coarse scan first
  Rational b = g.empty() ? Rational(1) : root_bound(g);
  for (int num = -64; num <= 64; ++num) {
    Rational t = b * Rational(num, 32);
    if (ueval(g, t) > 0) return t;
  }
  // zoom toward odd-multiplicity roots: g changes sign there
  for (auto [lo, hi] : isolate_real_roots(g)) {
    Rational l = lo, h = hi;
    for (int it = 0; it < 80; ++it) {
      if (ueval(g, l) > 0) return l;
      if (ueval(g, h) > 0) return h;
      Rational m = (l + h) / 2;
      if (ueval(g, m) > 0) return m;
      // shrink around the root inside (l, h]
      UPoly sf = squarefree_part(g);
      if (count_real_roots(sf, l, m) == 1)
        h = m;
      else
        l = m;
    }
  }
  return std::nullopt;
}

inline UniSignResult uni_nonpositive(UPoly g, bool strict) {
  unormalize(g);
  if (g.empty()) return {!strict, std::nullopt};
  if (udeg(g) == 0) {
    if ((strict && g[0] < 0) || (!strict && g[0] <= 0)) return {true, std::nullopt};
    return {false, g[0] > 0 ? std::optional<Rational>(0) : std::nullopt};
  }
  bool maybe = true;
  if (udeg(g) % 2 == 1 || g.back() > 0) maybe = false;
  if (maybe) {
    // sign changes happen exactly at odd-multiplicity real roots
    auto factors = squarefree_factors(g);
    UPoly odd{Rational(1)};
    for (std::size_t i = 0; i < factors.size(); i += 2)  // multiplicities 1,3,5,...
      if (udeg(factors[i]) > 0) {
        UPoly prod(odd.size() + factors[i].size() - 1, Rational(0));
        for (std::size_t a = 0; a < odd.size(); ++a)
          for (std::size_t b = 0; b < factors[i].size(); ++b)
            prod[a + b] += odd[a] * factors[i][b];
        odd = std::move(prod);
      }
    if (count_real_roots(odd) > 0) maybe = false;
  }
  if (maybe) {
    if (!strict) return {true, std::nullopt};
    // strictly negative everywhere iff additionally no real roots at all
    if (count_real_roots(g) == 0) return {true, std::nullopt};
    return {false, std::nullopt};  // touches zero: not strict, not violated
  }
  auto t = find_positive_point(g);
  return {false, t};
}

}  // namespace detail

/// Decides the sign of a homogeneous polynomial p of degree q on all of R^n.
/// Exact for q odd, q = 2, and even q with n <= 2; otherwise a randomized
/// falsification search that can only answer Violated or Undecided.
inline SignDecision homogeneous_sign_decide(const Poly& p, bool strict,
                                            std::uint64_t seed = 1) {
  std::size_t n = p.nvars;
  if (p.is_zero())
    return {strict && n > 0 ? SignOutcome::Undecided : SignOutcome::AlwaysNonpositive,
            {}};
  unsigned q = p.degree();
  if (q % 2 == 1) {
    // p(-w) = -p(w): nonpositive everywhere only if identically zero.
    // A nonzero polynomial with per-variable degree <= q is nonzero somewhere
    // on the grid {0..q}^n, so the deterministic scan below always finds a
    // nonzero value at desk scale.
    double grid_size = 1;
    for (std::size_t i = 0; i < n; ++i) grid_size *= q + 1;
    if (grid_size <= 200000.0) {
      std::vector<unsigned> idx(n, 0);
      for (;;) {
        QVec w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = Rational(idx[i]);
        Rational v = p.eval(w);
        if (v > 0) return {SignOutcome::Violated, w};
        if (v < 0) return {SignOutcome::Violated, -w};
        std::size_t i = 0;
        while (i < n && idx[i] == q) idx[i++] = 0;
        if (i == n) break;
        ++idx[i];
      }
    } else {
      std::mt19937_64 rng(seed);
      for (int trial = 0; trial < 20000; ++trial) {
        QVec w(n);
        for (auto& c : w)
          c = Rational(static_cast<long>(rng() % (2 * q + 1)) -
                       static_cast<long>(q));
        Rational v = p.eval(w);
        if (v > 0) return {SignOutcome::Violated, w};
        if (v < 0) return {SignOutcome::Violated, -w};
      }
    }
    return {SignOutcome::Undecided, {}};
  }
  if (q == 2) {
    QMat m(n, QVec(n, Rational(0)));
    for (const auto& [e, c] : p.terms) {
      std::vector<std::size_t> vars;
      for (std::size_t i = 0; i < n; ++i)
        for (unsigned k = 0; k < e[i]; ++k) vars.push_back(i);
      if (vars[0] == vars[1])
        m[vars[0]][vars[0]] += c;
      else {
        m[vars[0]][vars[1]] += c / 2;
        m[vars[1]][vars[0]] += c / 2;
      }
    }
    QMat id(n, QVec(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    NsdResult r = nsd_on_subspace(m, id);
    if (r.kind == SubspaceClass::ND) return {SignOutcome::AlwaysNegativeOffOrigin, {}};
    if (r.kind == SubspaceClass::NSD)
      return {strict ? SignOutcome::Undecided : SignOutcome::AlwaysNonpositive, {}};
    return {SignOutcome::Violated, std::move(r.witness)};
  }
  if (n == 1) {
    Rational c = p.terms.begin()->second;
    if (c < 0) return {SignOutcome::AlwaysNegativeOffOrigin, {}};
    if (c == 0) return {SignOutcome::AlwaysNonpositive, {}};
    return {SignOutcome::Violated, QVec{Rational(1)}};
  }
  if (n == 2) {
    // dehomogenize: p(1,t) on one chart plus the leftover direction (0,1)
    UPoly g(q + 1, Rational(0));
    for (const auto& [e, c] : p.terms) g[e[1]] += c;
    Rational at01 = 0;  // p(0,1)
    {
      Exponents e(2, 0);
      e[1] = q;
      auto it = p.terms.find(e);
      if (it != p.terms.end()) at01 = it->second;
    }
    auto r = detail::uni_nonpositive(g, strict);
    if (r.holds) {
      if (strict && at01 < 0) return {SignOutcome::AlwaysNegativeOffOrigin, {}};
      if (!strict && at01 <= 0) return {SignOutcome::AlwaysNonpositive, {}};
      if (at01 > 0) return {SignOutcome::Violated, QVec{Rational(0), Rational(1)}};
      return {SignOutcome::Undecided, {}};  // strict requested, p(0,1) = 0
    }
    if (r.violation) return {SignOutcome::Violated, QVec{Rational(1), *r.violation}};
    if (at01 > 0) return {SignOutcome::Violated, QVec{Rational(0), Rational(1)}};
    if (!strict) {
      // uni_nonpositive without violation point on the nonstrict path
      // only happens when it truly failed to find one; keep searching coarsely
      return {SignOutcome::Undecided, {}};
    }
    return {SignOutcome::Undecided, {}};  // nonstrict holds but strict fails somewhere
  }
  // even degree >= 4 in >= 3 variables: falsification only
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 20000; ++trial) {
    QVec w(n);
    for (auto& c : w) {
      long numr = static_cast<long>(rng() % 9) - 4;
      long denr = 1 + static_cast<long>(rng() % 4);
      c = Rational(numr, denr);
    }
    if (p.eval(w) > 0) return {SignOutcome::Violated, std::move(w)};
  }
  return {SignOutcome::Undecided, {}};
}

}  // namespace cqlab

#endif
