#ifndef CQLAB_MULTIPLIERS_HPP
#define CQLAB_MULTIPLIERS_HPP

#include "cqlab/problem.hpp"

namespace cqlab {

struct MissingObjectiveError : std::runtime_error {
  MissingObjectiveError()
      : std::runtime_error("operation requires an objective function") {}
};

/// ker(grad F^T) intersected with a normal cone (possibly directional).
/// empty == true marks the empty set, distinct from the trivial cone {0}.
struct MultiplierSet {
  PolyConeUnion cone;
  bool empty = false;
  QVec direction;  // range-space direction it was built from; empty = standard

  bool trivial() const { return !empty && cone.trivial(); }
};

namespace detail {

/// rows of grad F(xbar)^T lambda = 0, i.e. the Jacobian columns
inline QMat kernel_rows(const QMat& jac) { return transpose(jac); }

inline MultiplierSet intersect_with_kernel(const PolyConeUnion& normal,
                                           const QMat& ker, QVec direction) {
  MultiplierSet m;
  m.direction = std::move(direction);
  if (normal.empty_union()) {
    m.empty = true;
    m.cone.dim = normal.dim;
    return m;
  }
  std::vector<HCone> cones;
  for (const auto& [h, v] : normal.pieces) {
    HCone c = h;
    for (const auto& row : ker) c.eq.push_back(row);
    cones.push_back(std::move(c));
  }
  m.cone = make_union(normal.dim, cones);
  return m;
}

}  // namespace detail

inline MultiplierSet lambda0(const GmpInstance& inst) {
  const DisjunctiveSet& g = inst.disjunctive();
  QVec ybar = inst.F.eval(inst.xbar);
  QMat jac = inst.F.jacobian(inst.xbar);
  return detail::intersect_with_kernel(limiting_normal_cone(g, ybar),
                                       detail::kernel_rows(jac), {});
}

inline MultiplierSet lambda0_directional(const GmpInstance& inst, const QVec& u) {
  const DisjunctiveSet& g = inst.disjunctive();
  QVec ybar = inst.F.eval(inst.xbar);
  QMat jac = inst.F.jacobian(inst.xbar);
  QVec dir = mat_vec(jac, u);
  return detail::intersect_with_kernel(
      directional_limiting_normal_cone(g, ybar, dir),
      detail::kernel_rows(jac), dir);
}

// ---------------------------------------------------------------------------

/// One face-pattern region of range directions on which the directional
/// limiting normal cone is constant, together with its pullback along
/// grad F(xbar).
struct DirectionClass {
  std::vector<std::size_t> active_pieces;             // of the tangent union
  std::vector<std::vector<std::size_t>> active_sets;  // tight rows per piece
  QVec dir_witness;               // a range direction in the region (0 = apex)
  PolyConeUnion normal_value;     // N(ybar; d) for every d in the region
  MultiplierSet multipliers;      // kernel-intersected normal_value
  // region in range space as one or more (eqs, stricts) systems (the
  // disjunction over how excluded pieces are left)
  struct System {
    QMat eqs;
    QMat stricts;
  };
  std::vector<System> range_systems;
  std::optional<QVec> pullback_witness;  // u != 0 with grad F u in the region
};

struct DirectionAnalysis {
  DisjunctiveSet tangent_set;  // tangent-cone union as a set (rhs 0)
  std::vector<DirectionClass> classes;
};

namespace detail {

/// all ways to pick one strictly-violated row per excluded piece
inline void excluded_systems(const DisjunctiveSet& ts,
                             const std::vector<bool>& in_s, std::size_t k,
                             QMat& extra, const QMat& eqs, const QMat& stricts,
                             std::vector<DirectionClass::System>& out) {
  if (k == ts.pieces.size()) {
    QMat all = stricts;
    all.insert(all.end(), extra.begin(), extra.end());
    out.push_back({eqs, all});
    return;
  }
  if (in_s[k]) {
    excluded_systems(ts, in_s, k + 1, extra, eqs, stricts, out);
    return;
  }
  for (const auto& a : ts.pieces[k].ineq) {
    extra.push_back(-a);
    excluded_systems(ts, in_s, k + 1, extra, eqs, stricts, out);
    extra.pop_back();
  }
  for (const auto& a : ts.pieces[k].eq)
    for (int sgn : {+1, -1}) {
      extra.push_back(Rational(-sgn) * a);
      excluded_systems(ts, in_s, k + 1, extra, eqs, stricts, out);
      extra.pop_back();
    }
}

}  // namespace detail

inline DirectionAnalysis direction_classes(const GmpInstance& inst) {
  const DisjunctiveSet& g = inst.disjunctive();
  QVec ybar = inst.F.eval(inst.xbar);
  QMat jac = inst.F.jacobian(inst.xbar);
  QMat ker = detail::kernel_rows(jac);
  std::size_t n = inst.F.n;

  DirectionAnalysis da;
  da.tangent_set = tangent_as_set(g, ybar);
  const DisjunctiveSet& ts = da.tangent_set;
  QVec origin(g.dim, Rational(0));
  for (const auto& fp : enumerate_face_patterns(ts, origin)) {
    DirectionClass dc;
    dc.active_pieces = fp.active_pieces;
    dc.active_sets = fp.active_sets;
    dc.dir_witness = fp.witness_direction;
    dc.normal_value = limiting_normal_cone(ts, fp.witness_direction);
    dc.multipliers = detail::intersect_with_kernel(dc.normal_value, ker,
                                                   fp.witness_direction);
    // region systems
    QMat eqs, stricts;
    std::vector<bool> in_s(ts.pieces.size(), false);
    for (std::size_t t = 0; t < fp.active_pieces.size(); ++t) {
      std::size_t pi = fp.active_pieces[t];
      in_s[pi] = true;
      const HPoly& pc = ts.pieces[pi];
      for (const auto& e : pc.eq) eqs.push_back(e);
      std::vector<bool> tight(pc.ineq.size(), false);
      for (std::size_t r : fp.active_sets[t]) tight[r] = true;
      for (std::size_t r = 0; r < pc.ineq.size(); ++r)
        (tight[r] ? eqs : stricts).push_back(pc.ineq[r]);
    }
    QMat extra;
    detail::excluded_systems(ts, in_s, 0, extra, eqs, stricts, dc.range_systems);
    // pullback: u != 0 with grad F u in the region
    for (const auto& sys : dc.range_systems) {
      auto compose = [&](const QVec& a) {  // (a^T J) u
        QVec row(n, Rational(0));
        for (std::size_t k2 = 0; k2 < n; ++k2)
          for (std::size_t i = 0; i < g.dim; ++i) row[k2] += a[i] * jac[i][k2];
        return row;
      };
      QMat ueqs, ustricts;
      for (const auto& a : sys.eqs) ueqs.push_back(compose(a));
      for (const auto& a : sys.stricts) ustricts.push_back(compose(a));
      auto r = nonzero_strict_feasible(ueqs, {}, ustricts, n);
      if (r.feasible) {
        dc.pullback_witness = r.witness;
        break;
      }
    }
    da.classes.push_back(std::move(dc));
  }
  return da;
}

/// index of the class whose region contains the tangent direction d
inline std::optional<std::size_t> classify_direction(const DirectionAnalysis& da,
                                                     const QVec& d) {
  std::vector<std::size_t> s;
  std::vector<std::vector<std::size_t>> jsets;
  for (std::size_t pi = 0; pi < da.tangent_set.pieces.size(); ++pi) {
    const HPoly& pc = da.tangent_set.pieces[pi];
    if (!hpoly_contains(pc, d)) continue;
    s.push_back(pi);
    std::vector<std::size_t> j;
    for (std::size_t r = 0; r < pc.ineq.size(); ++r)
      if (dot(pc.ineq[r], d) == 0) j.push_back(r);
    jsets.push_back(std::move(j));
  }
  if (s.empty()) return std::nullopt;
  for (std::size_t c = 0; c < da.classes.size(); ++c)
    if (da.classes[c].active_pieces == s && da.classes[c].active_sets == jsets)
      return c;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

struct StationarityResult {
  bool stationary = false;
  QVec lambda;              // a multiplier when stationary
  std::size_t piece = 0;    // normal-cone piece realizing it
  // complementarity sign-pattern report for CC products:
  // per pair, either both components <= 0 or their product is 0
  bool mpcc_pattern_checked = false;
  bool mpcc_pattern_ok = false;
};

/// 0 in grad f(xbar) + grad F(xbar)^T N_Gamma(F(xbar)), decided piecewise.
inline StationarityResult m_stationarity(const GmpInstance& inst) {
  if (!inst.objective) throw MissingObjectiveError();
  const DisjunctiveSet& g = inst.disjunctive();
  QVec ybar = inst.F.eval(inst.xbar);
  QMat jac = inst.F.jacobian(inst.xbar);
  QVec gradf = inst.objective->jacobian(inst.xbar)[0];
  PolyConeUnion normal = limiting_normal_cone(g, ybar);
  std::size_t d = g.dim, n = inst.F.n;
  StationarityResult res;
  for (std::size_t pi = 0; pi < normal.pieces.size(); ++pi) {
    const HCone& h = normal.pieces[pi].first;
    LinProg p;
    p.nvars = d;
    // grad F^T lambda = -grad f
    for (std::size_t k = 0; k < n; ++k) {
      QVec row(d);
      for (std::size_t i = 0; i < d; ++i) row[i] = jac[i][k];
      p.eq_lhs.push_back(std::move(row));
      p.eq_rhs.push_back(-gradf[k]);
    }
    for (const auto& a : h.eq) {
      p.eq_lhs.push_back(a);
      p.eq_rhs.push_back(Rational(0));
    }
    for (const auto& a : h.ineq) {
      p.le_lhs.push_back(a);
      p.le_rhs.push_back(Rational(0));
    }
    auto r = lp_solve(p);
    if (r.status == LpStatus::Optimal) {
      res.stationary = true;
      res.lambda = r.x;
      res.piece = pi;
      break;
    }
  }
  // sign-pattern report for complementarity products at fully described points
  bool is_cc_product = g.ortho_flag && g.dim % 2 == 0;
  if (is_cc_product) {
    for (const auto& b : g.block_structure()) is_cc_product = is_cc_product && b.size == 2;
  }
  if (res.stationary && is_cc_product) {
    res.mpcc_pattern_checked = true;
    res.mpcc_pattern_ok = true;
    for (std::size_t pair = 0; 2 * pair + 1 < g.dim; ++pair) {
      const Rational& lg = res.lambda[2 * pair];
      const Rational& lh = res.lambda[2 * pair + 1];
      // sign restrictions only bind where both components are at the kink
      if (ybar[2 * pair] == 0 && ybar[2 * pair + 1] == 0) {
        bool ok = (lg <= 0 && lh <= 0) || lg * lh == 0;
        res.mpcc_pattern_ok = res.mpcc_pattern_ok && ok;
      }
    }
  }
  return res;
}

}  // namespace cqlab

#endif
