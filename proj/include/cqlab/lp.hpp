#ifndef CQLAB_LP_HPP
#define CQLAB_LP_HPP

#include <optional>
#include <utility>
#include <vector>

#include "cqlab/vec.hpp"

namespace cqlab {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status;
  Rational value;  // objective value when Optimal
  QVec x;          // optimizer when Optimal
};

namespace detail {

/// Exact simplex for max c^T x s.t. Ax <= b, x >= 0.
/// Tableau layout follows the classic two-phase scheme with a single
/// artificial column; Bland's rule on both entering and leaving variables
/// guarantees termination with rational arithmetic.
class SimplexTableau {
 public:
  SimplexTableau(const QMat& a, const QVec& b, const QVec& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        nonbasic_(n_ + 1),
        basic_(m_),
        d_(m_ + 2, QVec(n_ + 2, Rational(0))) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) d_[i][j] = a[i][j];
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      d_[i][n_] = -1;
      d_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1;
  }

  // returns Optimal or Unbounded (never Infeasible; feasibility handled in solve)
  std::optional<LpResult> solve() {
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    if (m_ > 0 && d_[r][n_ + 1] < 0) {
      pivot(r, n_);
      simplex(2);
      if (d_[m_ + 1][n_ + 1] < 0)
        return LpResult{LpStatus::Infeasible, Rational(0), {}};
      for (int i = 0; i < m_; ++i)
        if (basic_[i] == -1) {
          int s = -1;
          for (int j = 0; j <= n_; ++j)
            if (d_[i][j] != 0 && (s == -1 || nonbasic_[j] < nonbasic_[s])) s = j;
          pivot(i, s);
        }
    }
    bool bounded = simplex(1);
    if (!bounded) return LpResult{LpStatus::Unbounded, Rational(0), {}};
    QVec x(n_, Rational(0));
    for (int i = 0; i < m_; ++i)
      if (basic_[i] < n_) x[basic_[i]] = d_[i][n_ + 1];
    return LpResult{LpStatus::Optimal, d_[m_][n_ + 1], std::move(x)};
  }

 private:
  void pivot(int r, int s) {
    QVec& a = d_[r];
    Rational inv = Rational(1) / a[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || d_[i][s] == 0) continue;
      QVec& b = d_[i];
      Rational inv2 = b[s] * inv;
      for (int j = 0; j < n_ + 2; ++j) b[j] -= a[j] * inv2;
      b[s] = a[s] * inv2;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) d_[i][s] *= -inv;
    d_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool simplex(int phase) {
    int x = m_ + phase - 1;
    for (;;) {
      // Bland: entering = smallest label with negative reduced cost
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        if (d_[x][j] < 0 && (s == -1 || nonbasic_[j] < nonbasic_[s])) s = j;
      }
      if (s == -1) return true;
      // leaving = min ratio, ties by smallest basic label
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_[i][s] <= 0) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        Rational lhs = d_[i][n_ + 1] * d_[r][s];
        Rational rhs = d_[r][n_ + 1] * d_[i][s];
        if (lhs < rhs || (lhs == rhs && basic_[i] < basic_[r])) r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  std::vector<int> nonbasic_, basic_;
  QMat d_;
};

}  // namespace detail

/// General LP over free variables:
///   maximize objective^T x  s.t.  eq_lhs x = eq_rhs,  le_lhs x <= le_rhs.
struct LinProg {
  std::size_t nvars = 0;
  QMat eq_lhs;
  QVec eq_rhs;
  QMat le_lhs;
  QVec le_rhs;
  QVec objective;  // empty means feasibility only
};

inline LpResult lp_solve(const LinProg& p) {
  std::size_t nv = p.nvars;
  // split free variables, turn equalities into inequality pairs
  auto expand = [&](const QVec& row) {
    QVec r(2 * nv);
    for (std::size_t j = 0; j < nv; ++j) {
      r[j] = row[j];
      r[nv + j] = -row[j];
    }
    return r;
  };
  QMat a;
  QVec b;
  for (std::size_t i = 0; i < p.le_lhs.size(); ++i) {
    a.push_back(expand(p.le_lhs[i]));
    b.push_back(p.le_rhs[i]);
  }
  for (std::size_t i = 0; i < p.eq_lhs.size(); ++i) {
    a.push_back(expand(p.eq_lhs[i]));
    b.push_back(p.eq_rhs[i]);
    a.push_back(expand(-p.eq_lhs[i]));
    b.push_back(-p.eq_rhs[i]);
  }
  QVec c(2 * nv, Rational(0));
  if (!p.objective.empty())
    for (std::size_t j = 0; j < nv; ++j) {
      c[j] = p.objective[j];
      c[nv + j] = -p.objective[j];
    }
  detail::SimplexTableau tab(a, b, c);
  LpResult res = *tab.solve();
  if (res.status != LpStatus::Optimal) return res;
  QVec x(nv);
  for (std::size_t j = 0; j < nv; ++j) x[j] = res.x[j] - res.x[nv + j];
  res.x = std::move(x);
  return res;
}

/// Decides existence of v with  eqs v = 0, ineqs v <= 0, stricts v < 0
/// by maximizing a slack t with  stricts v + t <= 0, t <= 1.
struct StrictLpResult {
  bool feasible = false;
  QVec witness;
};

inline StrictLpResult strict_lp_feasible(const QMat& eqs, const QMat& ineqs,
                                         const QMat& stricts, std::size_t dim) {
  LinProg p;
  p.nvars = dim + 1;  // v, t
  auto pad = [&](const QVec& row, const Rational& tcoef) {
    QVec r = row;
    r.push_back(tcoef);
    return r;
  };
  for (const auto& row : eqs) {
    p.eq_lhs.push_back(pad(row, 0));
    p.eq_rhs.push_back(Rational(0));
  }
  for (const auto& row : ineqs) {
    p.le_lhs.push_back(pad(row, 0));
    p.le_rhs.push_back(Rational(0));
  }
  for (const auto& row : stricts) {
    p.le_lhs.push_back(pad(row, 1));
    p.le_rhs.push_back(Rational(0));
  }
  {
    QVec tcap(dim + 1, Rational(0));
    tcap[dim] = 1;
    p.le_lhs.push_back(tcap);
    p.le_rhs.push_back(Rational(1));
  }
  p.objective.assign(dim + 1, Rational(0));
  p.objective[dim] = 1;
  LpResult r = lp_solve(p);
  if (r.status != LpStatus::Optimal || r.value <= 0) return {false, {}};
  QVec v(r.x.begin(), r.x.begin() + dim);
  return {true, std::move(v)};
}

/// Existence of v != 0 with eqs v = 0 and stricts v < 0 (strict rows may be empty).
inline StrictLpResult nonzero_strict_feasible(const QMat& eqs, const QMat& ineqs,
                                              const QMat& stricts, std::size_t dim) {
  if (!stricts.empty()) return strict_lp_feasible(eqs, ineqs, stricts, dim);
  // v = 0 never meets a strict row, so only here must v != 0 be forced by hand
  for (std::size_t j = 0; j < dim; ++j) {
    for (int s : {+1, -1}) {
      QVec e(dim, Rational(0));
      e[j] = -s;  // -s*v_j < 0, i.e. s*v_j > 0
      auto r = strict_lp_feasible(eqs, ineqs, {e}, dim);
      if (r.feasible) return r;
    }
  }
  return {false, {}};
}

}  // namespace cqlab

#endif
