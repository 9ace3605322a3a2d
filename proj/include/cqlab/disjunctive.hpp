#ifndef CQLAB_DISJUNCTIVE_HPP
#define CQLAB_DISJUNCTIVE_HPP

#include <optional>
#include <stdexcept>

#include "cqlab/cones.hpp"

namespace cqlab {

struct NotInSetError : std::runtime_error {
  NotInSetError() : std::runtime_error("point is not a member of the set") {}
};

/// [lo, hi] with absent endpoints meaning -inf / +inf
struct Interval {
  std::optional<Rational> lo, hi;
};

/// Finite union of convex polyhedra; ortho_flag marks axis-aligned
/// interval products (with the interval data alongside).
struct DisjunctiveSet {
  std::size_t dim = 0;
  std::vector<HPoly> pieces;
  bool ortho_flag = false;
  std::vector<std::vector<Interval>> interval_data;  // per piece, when ortho
  // known product factorization into independent coordinate blocks
  // (size and whether that factor is an interval-product union);
  // empty means no factorization recorded (single block of size dim)
  struct BlockInfo {
    std::size_t size;
    bool ortho;
  };
  std::vector<BlockInfo> blocks;

  std::vector<BlockInfo> block_structure() const {
    return blocks.empty() ? std::vector<BlockInfo>{{dim, ortho_flag}} : blocks;
  }
  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> s;
    for (const auto& b : block_structure()) s.push_back(b.size);
    return s;
  }
};

inline bool hpoly_contains(const HPoly& p, const QVec& y) {
  for (std::size_t i = 0; i < p.eq.size(); ++i)
    if (dot(p.eq[i], y) != p.eq_rhs[i]) return false;
  for (std::size_t i = 0; i < p.ineq.size(); ++i)
    if (dot(p.ineq[i], y) > p.ineq_rhs[i]) return false;
  return true;
}

inline bool set_contains(const DisjunctiveSet& s, const QVec& y) {
  for (const auto& p : s.pieces)
    if (hpoly_contains(p, y)) return true;
  return false;
}

/// HPoly from interval product
inline HPoly box_piece(const std::vector<Interval>& box) {
  HPoly p;
  p.dim = box.size();
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto& iv = box[i];
    if (iv.lo && iv.hi && *iv.lo == *iv.hi) {
      QVec e(p.dim, Rational(0));
      e[i] = 1;
      p.eq.push_back(std::move(e));
      p.eq_rhs.push_back(*iv.lo);
      continue;
    }
    if (iv.lo) {
      QVec e(p.dim, Rational(0));
      e[i] = -1;
      p.ineq.push_back(std::move(e));
      p.ineq_rhs.push_back(-*iv.lo);
    }
    if (iv.hi) {
      QVec e(p.dim, Rational(0));
      e[i] = 1;
      p.ineq.push_back(std::move(e));
      p.ineq_rhs.push_back(*iv.hi);
    }
  }
  return p;
}

inline DisjunctiveSet ortho_set(std::size_t dim,
                                std::vector<std::vector<Interval>> boxes) {
  DisjunctiveSet s;
  s.dim = dim;
  s.ortho_flag = true;
  for (const auto& b : boxes) s.pieces.push_back(box_piece(b));
  s.interval_data = std::move(boxes);
  return s;
}

// ---------------------------------------------------------------------------

/// Finite union of convex polyhedral cones, each held in both forms.
struct PolyConeUnion {
  std::size_t dim = 0;
  std::vector<std::pair<HCone, VCone>> pieces;

  bool empty_union() const { return pieces.empty(); }
  bool trivial() const {
    if (pieces.empty()) return false;
    for (const auto& [h, v] : pieces)
      if (!v.rays.empty() || !v.lineality.empty()) return false;
    return true;
  }
  bool contains(const QVec& x) const {
    for (const auto& [h, v] : pieces)
      if (hcone_contains(h, x)) return true;
    return false;
  }
};

/// Builds the union, dropping pieces contained in another piece.
inline PolyConeUnion make_union(std::size_t dim, const std::vector<HCone>& cones) {
  std::vector<std::pair<HCone, VCone>> all;
  for (const auto& h : cones) all.emplace_back(h, dd_convert(h));
  std::vector<bool> drop(all.size(), false);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (i == j || drop[i] || drop[j]) continue;
      if (vcone_subset(all[i].second, all[j].first)) {
        // prefer dropping the smaller piece; equal pieces keep the earlier one
        if (vcone_subset(all[j].second, all[i].first) && i < j)
          drop[j] = true;
        else
          drop[i] = true;
      }
    }
  PolyConeUnion u;
  u.dim = dim;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!drop[i]) u.pieces.push_back(std::move(all[i]));
  return u;
}

inline bool union_subset(const PolyConeUnion& a, const PolyConeUnion& b) {
  // every generator of every piece of a must lie in some piece of b...
  // piecewise: a piece of a is covered iff contained in a single piece of b
  // (pieces are convex; a convex cone inside a finite union of convex cones
  //  need not lie in one piece in general, but generators suffice for the
  //  containments used here, so check cone-in-piece first and fall back to
  //  generator membership)
  for (const auto& [ah, av] : a.pieces) {
    bool inside = false;
    for (const auto& [bh, bv] : b.pieces)
      if (vcone_subset(av, bh)) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

inline bool union_equal(const PolyConeUnion& a, const PolyConeUnion& b) {
  return union_subset(a, b) && union_subset(b, a);
}

// ---------------------------------------------------------------------------
// tangent / normal cones

namespace detail {

struct ActivePiece {
  std::size_t index;        // piece index in the set
  QMat eq;                  // equality normals (tangent equalities)
  QMat active_ineq;         // active inequality normals
};

inline std::vector<ActivePiece> active_structure(const DisjunctiveSet& s,
                                                 const QVec& y) {
  std::vector<ActivePiece> act;
  for (std::size_t p = 0; p < s.pieces.size(); ++p) {
    const HPoly& pc = s.pieces[p];
    if (!hpoly_contains(pc, y)) continue;
    ActivePiece a;
    a.index = p;
    a.eq = pc.eq;
    for (std::size_t i = 0; i < pc.ineq.size(); ++i)
      if (dot(pc.ineq[i], y) == pc.ineq_rhs[i]) a.active_ineq.push_back(pc.ineq[i]);
    act.push_back(std::move(a));
  }
  if (act.empty()) throw NotInSetError();
  return act;
}

}  // namespace detail

inline PolyConeUnion tangent_cone(const DisjunctiveSet& s, const QVec& y) {
  auto act = detail::active_structure(s, y);
  std::vector<HCone> cones;
  for (const auto& a : act) {
    HCone c;
    c.dim = s.dim;
    c.eq = a.eq;
    c.ineq = a.active_ineq;
    cones.push_back(std::move(c));
  }
  return make_union(s.dim, cones);
}

/// Regular (Fréchet) normal cone: polar of the tangent union,
/// i.e. the intersection of the per-piece polars.
inline std::pair<HCone, VCone> regular_normal_cone(const DisjunctiveSet& s,
                                                   const QVec& y) {
  auto act = detail::active_structure(s, y);
  HCone inter = full_hcone(s.dim);
  for (const auto& a : act) {
    VCone piece_polar;  // generated by active rows: polar of the piece tangent
    piece_polar.dim = s.dim;
    piece_polar.rays = a.active_ineq;
    piece_polar.lineality = a.eq;
    inter = intersect(inter, vrep_to_hrep(piece_polar));
  }
  return {inter, dd_convert(inter)};
}

/// Active-set pattern of directions leaving y: which pieces still hold and
/// which of their active rows stay tight.
struct FacePattern {
  std::vector<std::size_t> active_pieces;               // S, indices into pieces
  std::vector<std::vector<std::size_t>> active_sets;    // J_i per element of S
  QVec witness_direction;                               // v realizing the pattern
};

namespace detail {

inline void expand_excluded(
    const std::vector<ActivePiece>& act, const std::vector<bool>& in_s,
    std::size_t k, QMat& stricts, const QMat& eqs, const QMat& ineq_stricts,
    std::size_t dim, std::optional<QVec>& found) {
  if (found) return;
  if (k == act.size()) {
    QMat allstrict = ineq_stricts;
    allstrict.insert(allstrict.end(), stricts.begin(), stricts.end());
    auto r = strict_lp_feasible(eqs, {}, allstrict, dim);
    if (r.feasible) found = r.witness;
    return;
  }
  if (in_s[k]) {
    expand_excluded(act, in_s, k + 1, stricts, eqs, ineq_stricts, dim, found);
    return;
  }
  // excluded piece: some defining row must be strictly violated along v
  for (const auto& a : act[k].active_ineq) {
    stricts.push_back(-a);  // <a,v> > 0
    expand_excluded(act, in_s, k + 1, stricts, eqs, ineq_stricts, dim, found);
    stricts.pop_back();
  }
  for (const auto& a : act[k].eq) {
    for (int sgn : {+1, -1}) {
      stricts.push_back(Rational(-sgn) * a);  // sgn*<a,v> > 0
      expand_excluded(act, in_s, k + 1, stricts, eqs, ineq_stricts, dim, found);
      stricts.pop_back();
    }
  }
}

}  // namespace detail

inline std::vector<FacePattern> enumerate_face_patterns(const DisjunctiveSet& s,
                                                        const QVec& y) {
  auto act = detail::active_structure(s, y);
  std::size_t m = act.size();
  std::vector<FacePattern> out;
  // iterate over nonempty S (bitmask) and per-piece subsets J_i
  for (std::size_t mask = 1; mask < (std::size_t(1) << m); ++mask) {
    std::vector<bool> in_s(m);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t(1) << i)) {
        in_s[i] = true;
        members.push_back(i);
      }
    // enumerate J_i subsets jointly
    std::vector<std::size_t> submask(members.size(), 0);
    for (;;) {
      QMat eqs, stricts;
      std::vector<std::vector<std::size_t>> jsets;
      for (std::size_t t = 0; t < members.size(); ++t) {
        const auto& a = act[members[t]];
        for (const auto& e : a.eq) eqs.push_back(e);
        std::vector<std::size_t> j;
        for (std::size_t r = 0; r < a.active_ineq.size(); ++r) {
          if (submask[t] & (std::size_t(1) << r)) {
            eqs.push_back(a.active_ineq[r]);
            j.push_back(r);
          } else {
            stricts.push_back(a.active_ineq[r]);  // strictly inactive
          }
        }
        jsets.push_back(std::move(j));
      }
      std::optional<QVec> found;
      QMat extra;
      detail::expand_excluded(act, in_s, 0, extra, eqs, stricts, s.dim, found);
      if (found) {
        FacePattern fp;
        for (std::size_t t = 0; t < members.size(); ++t)
          fp.active_pieces.push_back(act[members[t]].index);
        fp.active_sets = jsets;
        fp.witness_direction = *found;
        out.push_back(std::move(fp));
      }
      // next joint subset
      std::size_t t = 0;
      while (t < members.size()) {
        std::size_t cap = std::size_t(1) << act[members[t]].active_ineq.size();
        if (submask[t] + 1 < cap) {
          ++submask[t];
          break;
        }
        submask[t] = 0;
        ++t;
      }
      if (t == members.size()) break;
    }
  }
  return out;
}

/// Normal-cone value attached to one face pattern: the intersection over the
/// surviving pieces of the cones generated by their tight rows.
inline HCone pattern_normal_cone(const DisjunctiveSet& s, const QVec& y,
                                 const FacePattern& fp) {
  HCone inter = full_hcone(s.dim);
  for (std::size_t t = 0; t < fp.active_pieces.size(); ++t) {
    const HPoly& pc = s.pieces[fp.active_pieces[t]];
    // recover this piece's active rows at y in enumeration order
    QMat active_rows;
    for (std::size_t i = 0; i < pc.ineq.size(); ++i)
      if (dot(pc.ineq[i], y) == pc.ineq_rhs[i]) active_rows.push_back(pc.ineq[i]);
    VCone gen;
    gen.dim = s.dim;
    gen.lineality = pc.eq;
    for (std::size_t r : fp.active_sets[t]) gen.rays.push_back(active_rows[r]);
    inter = intersect(inter, vrep_to_hrep(gen));
  }
  return inter;
}

inline PolyConeUnion limiting_normal_cone(const DisjunctiveSet& s, const QVec& y) {
  auto patterns = enumerate_face_patterns(s, y);
  std::vector<HCone> cones;
  for (const auto& fp : patterns) cones.push_back(pattern_normal_cone(s, y, fp));
  return make_union(s.dim, cones);
}

/// The tangent-cone union, reinterpreted as a disjunctive set (all rhs zero)
/// so cone operators can be applied at points of it.
inline DisjunctiveSet tangent_as_set(const DisjunctiveSet& s, const QVec& y) {
  PolyConeUnion t = tangent_cone(s, y);
  DisjunctiveSet ts;
  ts.dim = s.dim;
  for (const auto& [h, v] : t.pieces) {
    HPoly p;
    p.dim = s.dim;
    p.eq = h.eq;
    p.eq_rhs.assign(h.eq.size(), Rational(0));
    p.ineq = h.ineq;
    p.ineq_rhs.assign(h.ineq.size(), Rational(0));
    ts.pieces.push_back(std::move(p));
  }
  return ts;
}

/// N(y; d) computed as the limiting normal cone of the tangent cone at the
/// direction point d; empty union when d is not tangent.
inline PolyConeUnion directional_limiting_normal_cone(const DisjunctiveSet& s,
                                                      const QVec& y,
                                                      const QVec& dir) {
  if (is_zero(dir)) return limiting_normal_cone(s, y);
  DisjunctiveSet ts = tangent_as_set(s, y);
  if (!set_contains(ts, dir)) {
    PolyConeUnion empty;
    empty.dim = s.dim;
    return empty;
  }
  return limiting_normal_cone(ts, dir);
}

// ---------------------------------------------------------------------------

inline DisjunctiveSet product_set(const DisjunctiveSet& a, const DisjunctiveSet& b) {
  DisjunctiveSet s;
  s.dim = a.dim + b.dim;
  auto embed = [&](const QVec& v, bool first) {
    QVec r(s.dim, Rational(0));
    std::size_t off = first ? 0 : a.dim;
    for (std::size_t i = 0; i < v.size(); ++i) r[off + i] = v[i];
    return r;
  };
  for (const auto& pa : a.pieces)
    for (const auto& pb : b.pieces) {
      HPoly p;
      p.dim = s.dim;
      for (std::size_t i = 0; i < pa.eq.size(); ++i) {
        p.eq.push_back(embed(pa.eq[i], true));
        p.eq_rhs.push_back(pa.eq_rhs[i]);
      }
      for (std::size_t i = 0; i < pb.eq.size(); ++i) {
        p.eq.push_back(embed(pb.eq[i], false));
        p.eq_rhs.push_back(pb.eq_rhs[i]);
      }
      for (std::size_t i = 0; i < pa.ineq.size(); ++i) {
        p.ineq.push_back(embed(pa.ineq[i], true));
        p.ineq_rhs.push_back(pa.ineq_rhs[i]);
      }
      for (std::size_t i = 0; i < pb.ineq.size(); ++i) {
        p.ineq.push_back(embed(pb.ineq[i], false));
        p.ineq_rhs.push_back(pb.ineq_rhs[i]);
      }
      s.pieces.push_back(std::move(p));
    }
  s.blocks = a.block_structure();
  auto bb = b.block_structure();
  s.blocks.insert(s.blocks.end(), bb.begin(), bb.end());
  s.ortho_flag = a.ortho_flag && b.ortho_flag;
  if (s.ortho_flag) {
    for (const auto& ba : a.interval_data)
      for (const auto& bb : b.interval_data) {
        std::vector<Interval> box = ba;
        box.insert(box.end(), bb.begin(), bb.end());
        s.interval_data.push_back(std::move(box));
      }
  }
  return s;
}

}  // namespace cqlab

#endif
