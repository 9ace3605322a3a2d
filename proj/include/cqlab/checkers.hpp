#ifndef CQLAB_CHECKERS_HPP
#define CQLAB_CHECKERS_HPP

#include <map>

#include "cqlab/oracle.hpp"
#include "cqlab/signforms.hpp"

namespace cqlab {

namespace detail {

struct RaySet {
  std::vector<QVec> rays;  // primitive; lineality contributes both signs
  bool has_lineality = false;
};

inline RaySet multiplier_rays(const MultiplierSet& m) {
  RaySet rs;
  if (m.empty) return rs;
  std::vector<QVec> raw;
  for (const auto& [h, v] : m.cone.pieces) {
    for (const auto& r : v.rays) raw.push_back(r);
    for (const auto& l : v.lineality) {
      rs.has_lineality = true;
      raw.push_back(l);
      raw.push_back(-l);
    }
  }
  for (const auto& r : raw) {
    QVec p = primitive(r);
    if (std::find(rs.rays.begin(), rs.rays.end(), p) == rs.rays.end())
      rs.rays.push_back(p);
  }
  return rs;
}

inline QVec compose_row(const QVec& a, const QMat& jac, std::size_t n) {
  QVec row(n, Rational(0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < a.size(); ++i) row[k] += a[i] * jac[i][k];
  return row;
}

inline Rational quad(const QMat& q, const QVec& u) {
  Rational v(0);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) v += u[i] * q[i][j] * u[j];
  return v;
}

inline bool strictly_inside(const QMat& stricts, const QVec& u) {
  for (const auto& row : stricts)
    if (!(dot(row, u) < 0)) return false;
  return true;
}

enum class ClassOutcome { Pass, Fail, Undecided };

struct ClassSecond {
  ClassOutcome out = ClassOutcome::Pass;
  QVec fail_u, fail_lambda;
  std::string note;
};

/// Second-order test on one direction class: every multiplier ray must have a
/// negative-definite restriction of the scalarized Hessian on the span of the
/// pullback region; 1-dimensional regions are decided exactly, otherwise
/// sampling falsification is attempted before giving up.
inline ClassSecond second_order_on_class(const GmpInstance& inst,
                                         const DirectionClass& dc,
                                         std::uint64_t seed) {
  ClassSecond res;
  if (!dc.pullback_witness) return res;
  RaySet rs = multiplier_rays(dc.multipliers);
  if (rs.rays.empty()) return res;
  QMat jac = inst.F.jacobian(inst.xbar);
  std::size_t n = inst.F.n;
  if (rs.has_lineality) {
    // a strict inequality cannot hold for both lambda and -lambda
    const QVec& u = *dc.pullback_witness;
    for (const auto& l : rs.rays) {
      QMat q = inst.F.hessian_scalarized(l, inst.xbar);
      if (quad(q, u) >= 0) {
        res.out = ClassOutcome::Fail;
        res.fail_u = u;
        res.fail_lambda = l;
        return res;
      }
    }
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  bool undecided = false;
  for (const auto& r : rs.rays) {
    QMat q = inst.F.hessian_scalarized(r, inst.xbar);
    for (const auto& sys : dc.range_systems) {
      QMat ueqs, ustr;
      for (const auto& a : sys.eqs) ueqs.push_back(compose_row(a, jac, n));
      for (const auto& a : sys.stricts) ustr.push_back(compose_row(a, jac, n));
      QMat basis = kernel_basis(ueqs, n);
      if (basis.empty()) continue;  // only u = 0 maps into this system
      auto cls = nsd_on_subspace(q, basis);
      if (cls.kind == SubspaceClass::ND) continue;
      if (basis.size() == 1) {
        bool any_inside = false;
        for (int sgn : {+1, -1}) {
          QVec b = sgn > 0 ? basis[0] : -basis[0];
          if (!strictly_inside(ustr, b)) continue;
          any_inside = true;
          if (quad(q, b) >= 0) {
            res.out = ClassOutcome::Fail;
            res.fail_u = b;
            res.fail_lambda = r;
            return res;
          }
        }
        (void)any_inside;  // empty region or strictly negative value: fine
        continue;
      }
      // dimension >= 2: look for an exact rational counterexample
      bool falsified = false;
      for (int tries = 0; tries < 400 && !falsified; ++tries) {
        QVec u(n, Rational(0));
        bool nz = false;
        for (const auto& b : basis) {
          long c = static_cast<long>(rng() % 7) - 3;
          if (c != 0) nz = true;
          for (std::size_t k = 0; k < n; ++k) u[k] += Rational(c) * b[k];
        }
        if (!nz || is_zero(u)) continue;
        if (!strictly_inside(ustr, u)) continue;
        if (quad(q, u) >= 0) {
          res.out = ClassOutcome::Fail;
          res.fail_u = u;
          res.fail_lambda = r;
          return res;
        }
      }
      undecided = true;
    }
  }
  if (undecided) {
    res.out = ClassOutcome::Undecided;
    res.note = "pullback region of dimension >= 2 not certified";
  }
  return res;
}

struct SeparableDecision {
  bool separable = false;
  bool local_max = false;
  std::size_t bad_coord = 0;
  int bad_sign = 1;  // sign of t along e_{bad_coord} with positive values
};

/// Exact local-maximality of 0 for a polynomial that is a sum of univariate
/// pieces: decided by the lowest-order term per coordinate.
inline SeparableDecision separable_local_max(const Poly& phi) {
  SeparableDecision sd;
  std::map<std::size_t, std::pair<unsigned, Rational>> lowest;
  for (const auto& [e, c] : phi.terms) {
    if (c == 0) continue;
    std::size_t coord = 0, nvars = 0;
    unsigned deg = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) {
        ++nvars;
        coord = i;
        deg = e[i];
      }
    if (nvars == 0) continue;
    if (nvars > 1) return sd;  // mixed term: not separable
    auto it = lowest.find(coord);
    if (it == lowest.end() || deg < it->second.first) lowest[coord] = {deg, c};
  }
  sd.separable = true;
  sd.local_max = true;
  for (const auto& [i, kc] : lowest) {
    auto [k, c] = kc;
    if (k % 2 == 1) {
      sd.local_max = false;
      sd.bad_coord = i;
      sd.bad_sign = (c > 0) ? +1 : -1;
      return sd;
    }
    if (c > 0) {
      sd.local_max = false;
      sd.bad_coord = i;
      sd.bad_sign = +1;
      return sd;
    }
  }
  return sd;
}

inline std::string ordinal(unsigned m) {
  switch (m) {
    case 1: return "1st";
    case 2: return "2nd";
    case 3: return "3rd";
    default: return std::to_string(m) + "th";
  }
}

/// all q-th order terms of <lambda, F(xbar + u) - F(xbar)> nonpositive for
/// q = 1..upto (inclusive); zero components pass
inline bool homogeneous_nonpositive_upto(const Poly& phi, unsigned upto,
                                         std::uint64_t seed) {
  for (unsigned q = 1; q <= upto; ++q) {
    Poly h = homogeneous_component(phi, q);
    if (h.is_zero()) continue;
    if (homogeneous_sign_decide(h, false, seed).outcome !=
        SignOutcome::AlwaysNonpositive)
      return false;
  }
  return true;
}

/// directional higher-order certificate on one class: exact for
/// 1-dimensional pullback regions; returns the order used
inline std::optional<unsigned> dir_higher_order_on_class(const GmpInstance& inst,
                                                         const DirectionClass& dc,
                                                         std::uint64_t seed) {
  if (!inst.F.all_polynomial()) return std::nullopt;
  RaySet rs = multiplier_rays(dc.multipliers);
  if (rs.rays.empty()) return 0;  // nothing to certify
  if (rs.has_lineality) return std::nullopt;
  QMat jac = inst.F.jacobian(inst.xbar);
  std::size_t n = inst.F.n;
  std::vector<Poly> phis;
  for (const auto& r : rs.rays) {
    Poly phi = inst.F.scalarized_shift(r, inst.xbar);
    if (phi.degree() > 6) return std::nullopt;
    phis.push_back(std::move(phi));
  }
  for (unsigned m : {4u, 6u}) {
    bool ok = true;
    for (const auto& sys : dc.range_systems) {
      if (!ok) break;
      QMat ueqs, ustr;
      for (const auto& a : sys.eqs) ueqs.push_back(compose_row(a, jac, n));
      for (const auto& a : sys.stricts) ustr.push_back(compose_row(a, jac, n));
      QMat basis = kernel_basis(ueqs, n);
      if (basis.empty()) continue;
      if (basis.size() > 1) {
        ok = false;
        break;
      }
      for (int sgn : {+1, -1}) {
        if (!ok) break;
        QVec b = sgn > 0 ? basis[0] : -basis[0];
        if (!strictly_inside(ustr, b) && !ustr.empty()) continue;
        for (const auto& phi : phis) {
          // q-th order terms nonpositive near the direction, m-th negative at it
          for (unsigned q = 1; q < m && ok; ++q) {
            Poly h = homogeneous_component(phi, q);
            if (h.is_zero()) continue;
            if (homogeneous_sign_decide(h, false, seed).outcome ==
                SignOutcome::AlwaysNonpositive)
              continue;
            if (h.eval(b) < 0) continue;
            ok = false;
          }
          if (ok && !(homogeneous_component(phi, m).eval(b) < 0)) ok = false;
          if (!ok) break;
        }
      }
    }
    if (ok) return m;
  }
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// u^T grad^2 <lambda, F>(xbar) u < 0 for every u != 0 (per-ray strict
/// second-order certificate)
inline bool per_ray_nd(const GmpInstance& inst, const QVec& lambda) {
  QMat q = inst.F.hessian_scalarized(lambda, inst.xbar);
  std::size_t n = inst.F.n;
  QMat id(n, QVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return nsd_on_subspace(q, id).kind == SubspaceClass::ND;
}

inline Verdict check_gmfcq(const GmpInstance& inst) {
  auto l0 = lambda0(inst);
  if (l0.trivial()) return holds("kernel-normal-intersection-trivial");
  auto rs = detail::multiplier_rays(l0);
  Verdict v;
  v.status = Status::FAILS;
  v.witness_lambda = rs.rays.front();
  return v;
}

inline Verdict check_foscms(const GmpInstance& inst) {
  auto da = direction_classes(inst);
  for (const auto& dc : da.classes) {
    if (!dc.pullback_witness) continue;
    auto rs = detail::multiplier_rays(dc.multipliers);
    if (rs.rays.empty()) continue;
    Verdict v;
    v.status = Status::FAILS;
    v.witness_lambda = rs.rays.front();
    v.witness_u = *dc.pullback_witness;
    return v;
  }
  return holds("directional-multiplier-cones-trivial");
}

inline Verdict check_soscms(const GmpInstance& inst, std::uint64_t seed = 0) {
  auto da = direction_classes(inst);
  Verdict out;
  bool undecided = false;
  for (const auto& dc : da.classes) {
    auto cs = detail::second_order_on_class(inst, dc, seed);
    if (cs.out == detail::ClassOutcome::Fail) {
      out.status = Status::FAILS;
      out.witness_lambda = cs.fail_lambda;
      out.witness_u = cs.fail_u;
      return out;
    }
    if (cs.out == detail::ClassOutcome::Undecided) {
      undecided = true;
      out.notes.push_back(cs.note);
    }
  }
  if (undecided) return out;
  return holds("per-ray-negative-definite-on-pullback-spans");
}

// ---------------------------------------------------------------------------

inline Verdict check_pseudo_normality(const GmpInstance& inst, bool directional,
                                      const ProbeConfig& cfg = {}) {
  const DisjunctiveSet& g = inst.disjunctive();
  MultiIndex dp = delta_p(g.dim);

  if (!directional) {
    auto l0 = lambda0(inst);
    if (l0.trivial()) return holds("no-nonzero-multipliers");
    if (inst.F.is_affine()) return holds("affine-map");
    auto rs = detail::multiplier_rays(l0);
    Verdict out;
    if (!rs.has_lineality) {
      bool all_nd = true;
      for (const auto& r : rs.rays)
        if (!per_ray_nd(inst, r)) all_nd = false;
      if (all_nd) return holds("second-order");
    } else {
      out.notes.push_back("multiplier cone has lineality; strict conditions skipped");
    }
    if (inst.F.all_polynomial()) {
      std::vector<Poly> phis;
      unsigned deg = 0;
      for (const auto& r : rs.rays) {
        phis.push_back(inst.F.scalarized_shift(r, inst.xbar));
        deg = std::max(deg, phis.back().degree());
      }
      if (deg <= 6) {
        bool polyn_ok = true;
        for (const auto& phi : phis)
          if (!detail::homogeneous_nonpositive_upto(phi, deg, cfg.seed))
            polyn_ok = false;
        if (polyn_ok)
          return holds("polynomial-" + std::to_string(deg) + "-osc");
        for (unsigned m : {4u, 6u}) {
          bool ok = true;
          for (const auto& phi : phis) {
            if (!detail::homogeneous_nonpositive_upto(phi, m - 1, cfg.seed)) {
              ok = false;
              break;
            }
            Poly hm = homogeneous_component(phi, m);
            if (hm.is_zero() ||
                homogeneous_sign_decide(hm, true, cfg.seed).outcome !=
                    SignOutcome::AlwaysNegativeOffOrigin) {
              ok = false;
              break;
            }
          }
          if (ok) return holds("order-" + std::to_string(m));
        }
        bool all_sep = true, all_max = true;
        for (std::size_t i = 0; i < phis.size(); ++i) {
          auto sd = detail::separable_local_max(phis[i]);
          if (!sd.separable) {
            all_sep = false;
            continue;
          }
          if (sd.local_max) continue;
          all_max = false;
          // exact violating sequence along the offending coordinate axis
          ProbeConfig deep = cfg;
          deep.witness_depth = 60;
          QVec u(inst.F.n, Rational(0));
          u[sd.bad_coord] = Rational(sd.bad_sign);
          auto w = witness_search(inst, rs.rays[i], dp, u, deep);
          if (w.found) {
            out.status = Status::FAILS;
            out.witness_lambda = rs.rays[i];
            out.witness_sequence = w.seq;
            return out;
          }
          out.notes.push_back("separable analysis found a violation but no sequence certificate");
        }
        if (all_sep && all_max) return holds("separable-local-maximum");
      } else {
        out.notes.push_back("polynomial degree above ladder cap 6");
      }
    }
    for (const auto& r : rs.rays) {
      auto w = witness_search(inst, r, dp, std::nullopt, cfg);
      if (w.found) {
        out.status = Status::FAILS;
        out.witness_lambda = r;
        out.witness_sequence = w.seq;
        return out;
      }
    }
    return out;  // UNDECIDED
  }

  // directional variant: one verdict per direction class, combined
  auto da = direction_classes(inst);
  Verdict out;
  bool undecided = false;
  for (const auto& dc : da.classes) {
    if (!dc.pullback_witness) continue;
    auto rs = detail::multiplier_rays(dc.multipliers);
    if (rs.rays.empty()) continue;
    auto cs = detail::second_order_on_class(inst, dc, cfg.seed);
    if (cs.out == detail::ClassOutcome::Pass) continue;
    if (auto m = detail::dir_higher_order_on_class(inst, dc, cfg.seed)) {
      out.notes.push_back("class certified by directional order-" +
                          std::to_string(*m) + " condition");
      continue;
    }
    bool found = false;
    for (const auto& r : rs.rays) {
      auto w = witness_search(inst, r, dp, *dc.pullback_witness, cfg);
      if (w.found) {
        out.status = Status::FAILS;
        out.witness_lambda = r;
        out.witness_u = *dc.pullback_witness;
        out.witness_sequence = w.seq;
        return out;
      }
    }
    (void)found;
    undecided = true;
    out.notes.push_back("direction class not certified and no violating sequence found");
  }
  if (undecided) return out;
  return holds("per-class-certificates");
}

// ---------------------------------------------------------------------------

namespace detail {

enum class PqRay { Vacuous, Holds, Inconclusive };

/// Second-order condition for one multiplier ray and a block multi-index:
/// exact when the premise subspace is trivial (vacuous) or 1-dimensional
/// (linear program in the auxiliary direction w).
inline PqRay soscpqn_ray(const GmpInstance& inst, const QVec& r,
                         const MultiIndex& delta, const QMat& extra_eqs = {}) {
  std::size_t n = inst.F.n;
  QMat jac = inst.F.jacobian(inst.xbar);
  std::vector<std::size_t> active = support(delta, r);
  QMat c_rows;
  std::vector<QMat> hessians;
  for (std::size_t b : active) {
    QVec lam_b(r.size(), Rational(0));
    for (std::size_t i = 0; i < delta.parts[b]; ++i) {
      std::size_t k = delta.block_offset(b) + i;
      lam_b[k] = r[k];
    }
    c_rows.push_back(compose_row(lam_b, jac, n));
    hessians.push_back(inst.F.hessian_scalarized(lam_b, inst.xbar));
  }
  QMat prem = c_rows;
  for (const auto& e : extra_eqs) prem.push_back(e);
  QMat basis = kernel_basis(prem, n);
  if (basis.empty()) return PqRay::Vacuous;
  if (basis.size() > 1) return PqRay::Inconclusive;
  for (int sgn : {+1, -1}) {
    QVec u = sgn > 0 ? basis[0] : -basis[0];
    // maximize t  s.t.  t - <c_nu, w> <= u^T Q_nu u, <u, w> = 0
    LinProg p;
    p.nvars = n + 1;  // w, t
    for (std::size_t i = 0; i < active.size(); ++i) {
      QVec row(n + 1, Rational(0));
      for (std::size_t k = 0; k < n; ++k) row[k] = -c_rows[i][k];
      row[n] = 1;
      p.le_lhs.push_back(std::move(row));
      p.le_rhs.push_back(quad(hessians[i], u));
    }
    QVec orth(n + 1, Rational(0));
    for (std::size_t k = 0; k < n; ++k) orth[k] = u[k];
    p.eq_lhs.push_back(std::move(orth));
    p.eq_rhs.push_back(Rational(0));
    p.objective.assign(n + 1, Rational(0));
    p.objective[n] = 1;
    auto res = lp_solve(p);
    if (res.status != LpStatus::Optimal || !(res.value < 0))
      return PqRay::Inconclusive;
  }
  return PqRay::Holds;
}

}  // namespace detail

inline Verdict check_pq_normality(const GmpInstance& inst, const MultiIndex& delta,
                                  bool directional, const ProbeConfig& cfg = {}) {
  const DisjunctiveSet& g = inst.disjunctive();
  if (delta.total() != g.dim)
    throw std::invalid_argument("multi-index does not partition the range space");
  bool admissible = is_admissible(g, delta);

  auto single_ray_pieces = [](const MultiplierSet& m, std::vector<QVec>& out) {
    if (m.empty) return true;
    for (const auto& [h, v] : m.cone.pieces) {
      if (!v.lineality.empty() || v.rays.size() > 1) return false;
      if (!v.rays.empty()) out.push_back(primitive(v.rays[0]));
    }
    return true;
  };

  if (!directional) {
    auto l0 = lambda0(inst);
    if (l0.trivial()) return holds("no-nonzero-multipliers");
    Verdict out;
    if (admissible) {
      if (inst.F.is_affine()) return holds("affine-map");
      std::vector<QVec> rays;
      if (single_ray_pieces(l0, rays)) {
        bool all_ok = true, all_vacuous = true;
        for (const auto& r : rays) {
          auto pr = detail::soscpqn_ray(inst, r, delta);
          if (pr == detail::PqRay::Vacuous) continue;
          all_vacuous = false;
          if (pr != detail::PqRay::Holds) all_ok = false;
        }
        if (all_ok)
          return holds(all_vacuous ? "soscpqn-vacuous" : "soscpqn");
      } else {
        out.notes.push_back(
            "multiplier cone not a union of single rays; exact paths skipped");
      }
    }
    auto rs = detail::multiplier_rays(l0);
    for (const auto& r : rs.rays) {
      auto w = witness_search(inst, r, delta, std::nullopt, cfg);
      if (w.found) {
        out.status = Status::FAILS;
        out.witness_lambda = r;
        out.witness_sequence = w.seq;
        return out;
      }
    }
    if (!admissible) throw AssumptionNotGuaranteedError(delta.str());
    return out;
  }

  // directional variant
  auto da = direction_classes(inst);
  QMat jac = inst.F.jacobian(inst.xbar);
  std::size_t n = inst.F.n;
  Verdict out;
  bool undecided = false, any_fail_search = false;
  for (const auto& dc : da.classes) {
    if (!dc.pullback_witness) continue;
    std::vector<QVec> rays;
    bool simple = single_ray_pieces(dc.multipliers, rays) && admissible;
    bool class_ok = false;
    if (simple) {
      bool all_ok = true;
      for (const auto& sys : dc.range_systems) {
        QMat ueqs;
        for (const auto& a : sys.eqs)
          ueqs.push_back(detail::compose_row(a, jac, n));
        for (const auto& r : rays)
          if (detail::soscpqn_ray(inst, r, delta, ueqs) ==
              detail::PqRay::Inconclusive)
            all_ok = false;
      }
      class_ok = all_ok;
    }
    if (class_ok) continue;
    auto rs = detail::multiplier_rays(dc.multipliers);
    for (const auto& r : rs.rays) {
      auto w = witness_search(inst, r, delta, *dc.pullback_witness, cfg);
      if (w.found) {
        out.status = Status::FAILS;
        out.witness_lambda = r;
        out.witness_u = *dc.pullback_witness;
        out.witness_sequence = w.seq;
        return out;
      }
    }
    any_fail_search = true;
    undecided = true;
  }
  (void)any_fail_search;
  if (!admissible) throw AssumptionNotGuaranteedError(delta.str());
  if (undecided) return out;
  return holds("per-class-soscpqn");
}

// ---------------------------------------------------------------------------

struct CheckReport {
  // fixed check order: gmfcq, foscms, soscms, pn, pn_dir, qn, mscq
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, std::string> derived;  // check -> implication source
  bool qn_gate_ok = true;  // false: quasi-normality gate (blockwise assumption)
  std::optional<ProbeResult> probe;
  std::string probe_error;
  std::uint64_t seed = 0;
};

inline const std::vector<std::pair<const char*, const char*>>&
implication_arrows() {
  static const std::vector<std::pair<const char*, const char*>> arrows = {
      {"gmfcq", "foscms"},  {"gmfcq", "pn"},    {"foscms", "soscms"},
      {"foscms", "pn_dir"}, {"soscms", "pn_dir"}, {"pn", "pn_dir"},
      {"pn", "qn"},         {"foscms", "mscq"}, {"soscms", "mscq"},
      {"pn", "mscq"},       {"pn_dir", "mscq"}, {"qn", "mscq"},
  };
  return arrows;
}

inline CheckReport check_all(const GmpInstance& inst, const ProbeConfig& cfg = {}) {
  CheckReport rep;
  rep.seed = cfg.seed;
  auto& V = rep.verdicts;
  if (!inst.gamma) {
    // analytic membership oracle only: exact calculus unavailable
    for (const char* k : {"gmfcq", "foscms", "soscms", "pn", "pn_dir", "qn", "mscq"}) {
      Verdict u;
      u.notes.push_back("analytic constraint set: exact checks unavailable");
      V[k] = u;
    }
    try {
      rep.probe = mscq_probe(inst, cfg);
    } catch (const EmptyPoolError& e) {
      rep.probe_error = e.what();
    }
    return rep;
  }
  V["gmfcq"] = check_gmfcq(inst);
  V["foscms"] = check_foscms(inst);
  try {
    V["soscms"] = check_soscms(inst, cfg.seed);
  } catch (const OrderCapError&) {
    Verdict u;
    u.notes.push_back("second derivatives unavailable");
    V["soscms"] = u;
  }
  V["pn"] = check_pseudo_normality(inst, false, cfg);
  V["pn_dir"] = check_pseudo_normality(inst, true, cfg);
  try {
    V["qn"] = check_pq_normality(inst, delta_q(inst.disjunctive().dim), false, cfg);
  } catch (const AssumptionNotGuaranteedError& e) {
    rep.qn_gate_ok = false;
    Verdict u;
    u.notes.push_back(e.what());
    V["qn"] = u;
  }
  V["mscq"] = undecided();

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [s, t] : implication_arrows()) {
      if (V[s].status != Status::HOLDS) continue;
      if (V[t].status == Status::FAILS)
        throw InternalConsistencyError(std::string(s) + " holds but " + t +
                                       " fails");
      if (V[t].status == Status::UNDECIDED) {
        Verdict d;
        d.status = Status::HOLDS;
        d.certificate = "implied";
        V[t] = d;
        rep.derived[t] = s;
        changed = true;
      }
    }
  }
  try {
    rep.probe = mscq_probe(inst, cfg);
  } catch (const EmptyPoolError& e) {
    rep.probe_error = e.what();
  }
  return rep;
}

// ---------------------------------------------------------------------------

/// The first sufficient condition, in a fixed cheapest/strongest-first order,
/// that certifies the error-bound property for the instance; falls back to
/// the sampling probe.
struct LadderOutcome {
  std::string label;
  std::string detail;
};

inline LadderOutcome certify_mscq_ladder(const GmpInstance& inst,
                                         const ProbeConfig& cfg = {}) {
  if (!inst.gamma) {
    // analytic constraint set: only the sampling probe applies
    goto probe_rung;
  }
  if (inst.F.is_affine()) return {"Robinson SC", "affine constraint map"};
  {
  auto l0 = lambda0(inst);
  if (l0.trivial()) return {"GMFCQ", "trivial multiplier cone"};
  if (check_soscms(inst, cfg.seed).status == Status::HOLDS) return {"SOSCMS", ""};
  auto rs = detail::multiplier_rays(l0);
  if (!rs.has_lineality) {
    bool all_nd = true;
    for (const auto& r : rs.rays)
      if (!per_ray_nd(inst, r)) all_nd = false;
    if (all_nd) return {"SOSCPN", ""};
  }
  if (inst.F.all_polynomial()) {
    std::vector<Poly> phis;
    unsigned deg = 0;
    for (const auto& r : rs.rays) {
      phis.push_back(inst.F.scalarized_shift(r, inst.xbar));
      deg = std::max(deg, phis.back().degree());
    }
    if (deg <= 6) {
      for (unsigned m : {4u, 6u}) {
        bool ok = true;
        for (const auto& phi : phis) {
          if (!detail::homogeneous_nonpositive_upto(phi, m - 1, cfg.seed)) {
            ok = false;
            break;
          }
          Poly hm = homogeneous_component(phi, m);
          if (hm.is_zero() ||
              homogeneous_sign_decide(hm, true, cfg.seed).outcome !=
                  SignOutcome::AlwaysNegativeOffOrigin) {
            ok = false;
            break;
          }
        }
        if (ok) return {detail::ordinal(m) + "-OSC", ""};
      }
      bool polyn_ok = true;
      for (const auto& phi : phis)
        if (!detail::homogeneous_nonpositive_upto(phi, deg, cfg.seed))
          polyn_ok = false;
      if (polyn_ok)
        return {"Polyn. " + detail::ordinal(deg) + "-OSC", ""};
      bool all_sep = true, all_max = true;
      for (const auto& phi : phis) {
        auto sd = detail::separable_local_max(phi);
        if (!sd.separable) all_sep = false;
        else if (!sd.local_max) all_max = false;
      }
      if (all_sep && all_max)
        return {"Pseudo-normality", "separable exact local maximality"};
      // directional higher-order conditions, class by class
      auto da = direction_classes(inst);
      bool ok = true;
      unsigned used = 0;
      for (const auto& dc : da.classes) {
        if (!dc.pullback_witness) continue;
        if (detail::multiplier_rays(dc.multipliers).rays.empty()) continue;
        if (detail::second_order_on_class(inst, dc, cfg.seed).out ==
            detail::ClassOutcome::Pass)
          continue;
        auto m = detail::dir_higher_order_on_class(inst, dc, cfg.seed);
        if (!m) {
          ok = false;
          break;
        }
        used = std::max(used, *m);
      }
      if (ok && used > 0) return {"Dir. " + detail::ordinal(used) + "-OSC", ""};
    }
  }
  try {
    auto qn = check_pq_normality(inst, delta_q(inst.disjunctive().dim), false, cfg);
    if (qn.status == Status::HOLDS) return {"Quasi-normality", qn.certificate};
  } catch (const AssumptionNotGuaranteedError&) {
  }
  }
probe_rung:
  try {
    auto probe = mscq_probe(inst, cfg);
    switch (probe.verdict) {
      case ProbeVerdict::Bounded:
        return {"probe: BOUNDED", ""};
      case ProbeVerdict::DivergenceSuspected:
        return {"probe: DIVERGENCE_SUSPECTED", ""};
      default:
        return {"probe: INCONCLUSIVE", ""};
    }
  } catch (const EmptyPoolError&) {
    return {"probe: INCONCLUSIVE", "empty feasible pool"};
  }
}

}  // namespace cqlab

#endif
