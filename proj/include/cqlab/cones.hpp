#ifndef CQLAB_CONES_HPP
#define CQLAB_CONES_HPP

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "cqlab/lp.hpp"
#include "cqlab/vec.hpp"

namespace cqlab {

inline constexpr std::size_t kDimensionCap = 12;

struct DimensionCapError : std::runtime_error {
  explicit DimensionCapError(std::size_t d)
      : std::runtime_error("ambient dimension " + std::to_string(d) +
                           " exceeds cap " + std::to_string(kDimensionCap)) {}
};

/// {y : eq y = eq_rhs, ineq y <= ineq_rhs}
struct HPoly {
  std::size_t dim = 0;
  QMat eq;
  QVec eq_rhs;
  QMat ineq;
  QVec ineq_rhs;
};

/// {v : eq v = 0, ineq v <= 0}
struct HCone {
  std::size_t dim = 0;
  QMat eq;
  QMat ineq;
};

/// {sum mu_i rays_i + span(lineality) : mu >= 0}
struct VCone {
  std::size_t dim = 0;
  QMat rays;
  QMat lineality;
};

inline bool hcone_contains(const HCone& c, const QVec& x) {
  for (const auto& a : c.eq)
    if (dot(a, x) != 0) return false;
  for (const auto& a : c.ineq)
    if (dot(a, x) > 0) return false;
  return true;
}

/// Is x a nonnegative combination of rays plus a lineality element?
inline bool conic_member(const QMat& rays, const QMat& lineality, const QVec& x,
                         std::size_t dim) {
  if (is_zero(x)) return true;
  LinProg p;
  std::size_t nr = rays.size(), nl = lineality.size();
  p.nvars = nr + nl;
  if (p.nvars == 0) return false;
  // equality per coordinate
  for (std::size_t k = 0; k < dim; ++k) {
    QVec row(p.nvars);
    for (std::size_t i = 0; i < nr; ++i) row[i] = rays[i][k];
    for (std::size_t j = 0; j < nl; ++j) row[nr + j] = lineality[j][k];
    p.eq_lhs.push_back(std::move(row));
    p.eq_rhs.push_back(x[k]);
  }
  for (std::size_t i = 0; i < nr; ++i) {
    QVec row(p.nvars, Rational(0));
    row[i] = -1;
    p.le_lhs.push_back(std::move(row));
    p.le_rhs.push_back(Rational(0));
  }
  return lp_solve(p).status == LpStatus::Optimal;
}

inline bool vcone_contains(const VCone& c, const QVec& x) {
  return conic_member(c.rays, c.lineality, x, c.dim);
}

/// Reduced lineality basis + rays reduced modulo it, primitive, deduped,
/// conically irredundant. Gives a canonical generator set up to ray order.
inline VCone canonicalize(VCone c) {
  std::vector<std::size_t> piv;
  row_reduce(c.lineality, &piv);
  while (!c.lineality.empty() && is_zero(c.lineality.back())) c.lineality.pop_back();
  for (auto& l : c.lineality) l = primitive(l);
  // reduce rays modulo lineality using the pivot structure
  QMat reduced;
  std::set<QVec> seen;
  for (QVec r : c.rays) {
    for (std::size_t i = 0; i < c.lineality.size(); ++i) {
      const Rational& pv = c.lineality[i][piv[i]];
      if (r[piv[i]] != 0) r = r - (r[piv[i]] / pv) * c.lineality[i];
    }
    if (is_zero(r)) continue;
    r = primitive(r);
    if (seen.insert(r).second) reduced.push_back(std::move(r));
  }
  // drop rays generated by the remaining ones
  QMat kept;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    QMat others = kept;
    for (std::size_t j = i + 1; j < reduced.size(); ++j) others.push_back(reduced[j]);
    if (!conic_member(others, c.lineality, reduced[i], c.dim))
      kept.push_back(reduced[i]);
  }
  std::sort(kept.begin(), kept.end());
  c.rays = std::move(kept);
  return c;
}

namespace detail {

/// One double-description step: intersect (rays, lineality) with
/// {<a,x> <= 0} or, when as_equality, with {<a,x> = 0}.
inline void dd_step(QMat& rays, QMat& lineality, const QVec& a, bool as_equality,
                    std::size_t dim) {
  // a lineality vector crossing the hyperplane lets us eliminate directly
  for (std::size_t k = 0; k < lineality.size(); ++k) {
    Rational s = dot(a, lineality[k]);
    if (s == 0) continue;
    QVec l0 = lineality[k];
    if (s > 0) {
      l0 = -l0;
      s = -s;
    }  // now <a,l0> = s < 0
    QMat newlin;
    for (std::size_t j = 0; j < lineality.size(); ++j) {
      if (j == k) continue;
      newlin.push_back(lineality[j] - (dot(a, lineality[j]) / s) * l0);
    }
    for (auto& r : rays) r = r - (dot(a, r) / s) * l0;
    if (!as_equality) rays.push_back(l0);
    lineality = std::move(newlin);
    return;
  }
  QMat zero, neg, pos;
  for (auto& r : rays) {
    int sg = sign(Rational(dot(a, r)));
    (sg == 0 ? zero : sg < 0 ? neg : pos).push_back(r);
  }
  QMat out = zero;
  if (!as_equality)
    for (auto& r : neg) out.push_back(r);
  for (const auto& rp : pos)
    for (const auto& rn : neg)
      out.push_back(primitive(dot(a, rp) * rn - dot(a, rn) * rp));
  rays = std::move(out);
  (void)dim;
}

}  // namespace detail

inline VCone dd_convert(const HCone& c) {
  if (c.dim > kDimensionCap) throw DimensionCapError(c.dim);
  VCone v;
  v.dim = c.dim;
  v.lineality.assign(c.dim, QVec(c.dim, Rational(0)));
  for (std::size_t i = 0; i < c.dim; ++i) v.lineality[i][i] = 1;
  for (const auto& a : c.eq) {
    detail::dd_step(v.rays, v.lineality, a, true, c.dim);
    v = canonicalize(std::move(v));
  }
  for (const auto& a : c.ineq) {
    detail::dd_step(v.rays, v.lineality, a, false, c.dim);
    v = canonicalize(std::move(v));
  }
  return v;
}

/// polar of a V-cone, directly in H-form: {z : <r,z> <= 0, <l,z> = 0}
inline HCone polar_as_hcone(const VCone& c) {
  HCone h;
  h.dim = c.dim;
  h.ineq = c.rays;
  h.eq = c.lineality;
  return h;
}

inline VCone polar(const VCone& c) { return dd_convert(polar_as_hcone(c)); }

/// polar of an H-cone, in V-form: generated by the inequality normals
/// plus the span of the equality normals
inline VCone polar(const HCone& c) {
  VCone v;
  v.dim = c.dim;
  v.rays = c.ineq;
  v.lineality = c.eq;
  return canonicalize(std::move(v));
}

inline HCone vrep_to_hrep(const VCone& c) {
  if (c.dim > kDimensionCap) throw DimensionCapError(c.dim);
  VCone pol = polar(canonicalize(c));
  return polar_as_hcone(pol);  // double polarity: closed convex cone
}

inline bool cone_is_trivial(const HCone& c) {
  VCone v = dd_convert(c);
  return v.rays.empty() && v.lineality.empty();
}

inline bool cone_is_trivial(const VCone& c) {
  VCone v = canonicalize(c);
  return v.rays.empty() && v.lineality.empty();
}

inline bool vcone_subset(const VCone& a, const HCone& b) {
  for (const auto& r : a.rays)
    if (!hcone_contains(b, r)) return false;
  for (const auto& l : a.lineality)
    if (!hcone_contains(b, l) || !hcone_contains(b, -l)) return false;
  return true;
}

inline bool cone_equal(const HCone& a, const HCone& b) {
  return vcone_subset(dd_convert(a), b) && vcone_subset(dd_convert(b), a);
}

inline bool cone_equal(const VCone& a, const VCone& b) {
  return vcone_subset(a, vrep_to_hrep(b)) && vcone_subset(b, vrep_to_hrep(a));
}

inline HCone intersect(const HCone& a, const HCone& b) {
  HCone c = a;
  c.eq.insert(c.eq.end(), b.eq.begin(), b.eq.end());
  c.ineq.insert(c.ineq.end(), b.ineq.begin(), b.ineq.end());
  return c;
}

/// {0} in the given dimension
inline HCone trivial_hcone(std::size_t dim) {
  HCone c;
  c.dim = dim;
  for (std::size_t i = 0; i < dim; ++i) {
    QVec e(dim, Rational(0));
    e[i] = 1;
    c.eq.push_back(std::move(e));
  }
  return c;
}

inline HCone full_hcone(std::size_t dim) {
  HCone c;
  c.dim = dim;
  return c;
}

}  // namespace cqlab

#endif
