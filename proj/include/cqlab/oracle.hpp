#ifndef CQLAB_ORACLE_HPP
#define CQLAB_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "cqlab/multipliers.hpp"
#include "cqlab/verdict.hpp"

namespace cqlab {

enum class Norm { L2, L1, Linf };

struct EmptyPoolError : std::runtime_error {
  EmptyPoolError()
      : std::runtime_error("no feasible sample found for distance estimation") {}
};

namespace detail {

/// Exact squared Euclidean distance from y to one polyhedron: minimum over
/// faces of the projection onto the face's affine hull, kept only when the
/// projection lands back inside the polyhedron.
inline Rational hpoly_distance_sq(const HPoly& p, const QVec& y) {
  if (hpoly_contains(p, y)) return Rational(0);
  std::size_t m = p.ineq.size();
  Rational best(-1);
  for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
    QMat rows;
    QVec rhs;
    for (std::size_t i = 0; i < p.eq.size(); ++i) {
      rows.push_back(p.eq[i]);
      rhs.push_back(p.eq_rhs[i]);
    }
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t(1) << i)) {
        rows.push_back(p.ineq[i]);
        rhs.push_back(p.ineq_rhs[i]);
      }
    QVec z = y;
    if (!rows.empty()) {
      // reduce to an independent consistent subsystem
      QMat aug;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        QVec r = rows[i];
        r.push_back(rhs[i]);
        aug.push_back(std::move(r));
      }
      std::size_t rk = row_reduce(aug);
      QMat r2;
      QVec b2;
      bool consistent = true;
      for (std::size_t i = 0; i < rk; ++i) {
        QVec lhs(aug[i].begin(), aug[i].end() - 1);
        if (is_zero(lhs)) {
          if (aug[i].back() != 0) consistent = false;
          continue;
        }
        r2.push_back(std::move(lhs));
        b2.push_back(aug[i].back());
      }
      if (!consistent) continue;
      if (!r2.empty()) {
        // z = y - R^T mu with (R R^T) mu = R y - b
        QMat gram(r2.size(), QVec(r2.size()));
        QVec rhs2(r2.size());
        for (std::size_t i = 0; i < r2.size(); ++i) {
          for (std::size_t j = 0; j < r2.size(); ++j)
            gram[i][j] = dot(r2[i], r2[j]);
          rhs2[i] = dot(r2[i], y) - b2[i];
        }
        auto mu = solve_linear(gram, rhs2);
        if (!mu) continue;
        for (std::size_t i = 0; i < r2.size(); ++i)
          for (std::size_t k = 0; k < z.size(); ++k) z[k] -= (*mu)[i] * r2[i][k];
      }
    }
    if (!hpoly_contains(p, z)) continue;
    Rational d(0);
    for (std::size_t k = 0; k < z.size(); ++k)
      d += (y[k] - z[k]) * (y[k] - z[k]);
    if (best < 0 || d < best) best = d;
  }
  return best;  // -1 never happens: the all-rows face or some face is nonempty
}

/// Exact l1 / linf distance from y to one polyhedron via linear programming.
inline Rational hpoly_distance_lp(const HPoly& p, const QVec& y, Norm norm) {
  std::size_t n = p.dim;
  std::size_t nt = (norm == Norm::Linf) ? 1 : n;
  LinProg lp;
  lp.nvars = n + nt;  // z, t
  auto row = [&](std::initializer_list<std::pair<std::size_t, Rational>> c) {
    QVec r(lp.nvars, Rational(0));
    for (auto& [i, v] : c) r[i] = v;
    return r;
  };
  for (std::size_t i = 0; i < p.eq.size(); ++i) {
    QVec r(lp.nvars, Rational(0));
    for (std::size_t k = 0; k < n; ++k) r[k] = p.eq[i][k];
    lp.eq_lhs.push_back(std::move(r));
    lp.eq_rhs.push_back(p.eq_rhs[i]);
  }
  for (std::size_t i = 0; i < p.ineq.size(); ++i) {
    QVec r(lp.nvars, Rational(0));
    for (std::size_t k = 0; k < n; ++k) r[k] = p.ineq[i][k];
    lp.le_lhs.push_back(std::move(r));
    lp.le_rhs.push_back(p.ineq_rhs[i]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t ti = n + ((norm == Norm::Linf) ? 0 : k);
    // y_k - z_k <= t, z_k - y_k <= t
    lp.le_lhs.push_back(row({{k, Rational(-1)}, {ti, Rational(-1)}}));
    lp.le_rhs.push_back(-y[k]);
    lp.le_lhs.push_back(row({{k, Rational(1)}, {ti, Rational(-1)}}));
    lp.le_rhs.push_back(y[k]);
  }
  lp.objective.assign(lp.nvars, Rational(0));
  for (std::size_t i = n; i < lp.nvars; ++i) lp.objective[i] = -1;  // minimize
  auto r = lp_solve(lp);
  if (r.status != LpStatus::Optimal) return Rational(-1);  // empty piece
  return -r.value;
}

}  // namespace detail

struct GammaDistance {
  Rational value;
  bool squared = false;  // true for the exact l2 path (value = distance^2)
};

inline GammaDistance distance_to_gamma(const DisjunctiveSet& g, const QVec& y,
                                       Norm norm = Norm::L2) {
  GammaDistance out;
  out.squared = (norm == Norm::L2);
  Rational best(-1);
  for (const auto& p : g.pieces) {
    Rational d = (norm == Norm::L2) ? detail::hpoly_distance_sq(p, y)
                                    : detail::hpoly_distance_lp(p, y, norm);
    if (d < 0) continue;
    if (best < 0 || d < best) best = d;
  }
  out.value = best;
  return out;
}

/// l1-across-blocks of linf-per-block distance for ortho sets; this is the
/// norm used by the blockwise penalty (e.g. sum_i |min{G_i, H_i}| for
/// complementarity products).
inline Rational block_l1_linf_distance(const DisjunctiveSet& g, const QVec& y) {
  if (g.interval_data.empty())
    throw std::invalid_argument("blockwise distance requires interval pieces");
  auto sizes = g.block_sizes();
  Rational best(-1);
  for (const auto& box : g.interval_data) {
    Rational total(0);
    std::size_t off = 0;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
      Rational block(0);
      for (std::size_t k = 0; k < sizes[b]; ++k) {
        const Interval& iv = box[off + k];
        Rational v = y[off + k];
        Rational dev(0);
        if (iv.lo && v < *iv.lo) dev = *iv.lo - v;
        if (iv.hi && v > *iv.hi) dev = v - *iv.hi;
        if (dev > block) block = dev;
      }
      total += block;
      off += sizes[b];
    }
    if (best < 0 || total < best) best = total;
  }
  return best;
}

// ---------------------------------------------------------------------------

struct ProbeConfig {
  double r0 = 0.5;
  int num_radii = 21;  // r_j = r0 * 2^{-j}, j = 0 .. num_radii-1
  int samples_per_radius = 512;
  std::uint64_t seed = 0;
  int pool_resolution = 65;  // grid points per axis for the feasible pool
  double divergence_threshold = -0.25;
  int slope_window = 8;  // finest radii used for the log-log fit
  // closed-form distance to the feasible set, when known
  std::function<double(const std::vector<double>&)> feasible_distance_override;
  // witness search controls
  int witness_depth = 30;
  Rational witness_t0 = Rational(1, 4);
};

namespace detail {

inline double gamma_distance_d(const GmpInstance& inst,
                               const std::vector<double>& xd) {
  if (inst.gamma) {
    QVec yq;
    for (double c : inst.F.eval_d(xd)) yq.push_back(rat_from_double(c));
    auto d = distance_to_gamma(*inst.gamma, yq, Norm::L2);
    return std::sqrt(to_double(d.value));
  }
  return inst.analytic_gamma->distance(inst.F.eval_d(xd));
}

inline std::vector<std::vector<double>> feasible_pool(const GmpInstance& inst,
                                                      const ProbeConfig& cfg) {
  std::size_t n = inst.F.n;
  std::vector<double> xb;
  for (const auto& c : inst.xbar) xb.push_back(to_double(c));
  double step = 2.0 / (cfg.pool_resolution - 1);
  std::vector<std::vector<double>> pool;
  std::vector<int> idx(n, 0);
  bool exact = inst.gamma && inst.F.all_polynomial();
  while (true) {
    std::vector<double> pt(n);
    for (std::size_t i = 0; i < n; ++i) pt[i] = xb[i] - 1.0 + idx[i] * step;
    bool feas;
    if (exact) {
      QVec x;
      for (double c : pt) x.push_back(rat_from_double(c));
      feas = set_contains(*inst.gamma, inst.F.eval(x));
    } else {
      feas = gamma_distance_d(inst, pt) <= step * step;
    }
    if (feas) pool.push_back(std::move(pt));
    std::size_t i = 0;
    while (i < n && ++idx[i] == cfg.pool_resolution) idx[i++] = 0;
    if (i == n) break;
  }
  return pool;
}

inline void enumerate_grid(std::size_t n, int lo, int hi,
                           const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> v(n, lo);
  while (true) {
    f(v);
    std::size_t i = 0;
    while (i < n && ++v[i] > hi) v[i++] = lo;
    if (i == n) return;
  }
}

}  // namespace detail

/// Estimated distance from x to the feasible set, from a closed-form override
/// or a grid pool of exactly verified feasible points.
inline double feasible_distance_estimate(const GmpInstance& inst,
                                         const std::vector<double>& x,
                                         const ProbeConfig& cfg) {
  if (cfg.feasible_distance_override) return cfg.feasible_distance_override(x);
  auto pool = detail::feasible_pool(inst, cfg);
  if (pool.empty()) throw EmptyPoolError();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pool) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - p[i]) * (x[i] - p[i]);
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

enum class ProbeVerdict { Bounded, DivergenceSuspected, Inconclusive };

struct ProbeResult {
  std::vector<double> radii;
  std::vector<double> sup_ratio;  // per radius; NaN when no valid sample
  double kappa_hat = 0;           // max sampled d_X / d_Gamma(F)
  double slope = 0;               // log-log fit over the finest valid radii
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  std::vector<std::vector<double>> witness_points;  // maximizers, finest radii
  std::vector<double> witness_ratios;
};

/// Samples around xbar on a geometric radius ladder and compares the distance
/// to the feasible set against the constraint residual d_Gamma(F(x)).  A
/// strongly negative slope of log(sup ratio) vs log(radius) flags that no
/// finite error-bound constant can work.
inline ProbeResult mscq_probe(const GmpInstance& inst, const ProbeConfig& cfg) {
  std::size_t n = inst.F.n;
  std::vector<double> xb;
  for (const auto& c : inst.xbar) xb.push_back(to_double(c));
  std::function<double(const std::vector<double>&)> dx;
  if (cfg.feasible_distance_override) {
    dx = cfg.feasible_distance_override;
  } else {
    auto pool = detail::feasible_pool(inst, cfg);
    if (pool.empty()) throw EmptyPoolError();
    dx = [pool](const std::vector<double>& x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : pool) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
          s += (x[i] - p[i]) * (x[i] - p[i]);
        best = std::min(best, std::sqrt(s));
      }
      return best;
    };
  }

  // deterministic directions catch violations confined to thin regions
  // (e.g. along a coordinate axis) that uniform sampling almost surely misses
  std::vector<std::vector<double>> grid_dirs;
  if (n <= 4) {
    detail::enumerate_grid(n, -1, 1, [&](const std::vector<int>& v) {
      if (std::all_of(v.begin(), v.end(), [](int c) { return c == 0; })) return;
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = v[i];
      grid_dirs.push_back(std::move(d));
    });
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> d(n, 0.0);
        d[i] = sgn;
        grid_dirs.push_back(std::move(d));
      }
  }

  ProbeResult res;
  std::vector<std::vector<double>> argmax(cfg.num_radii);
  for (int j = 0; j < cfg.num_radii; ++j) {
    double r = cfg.r0 * std::pow(2.0, -j);
    res.radii.push_back(r);
    double sup = std::numeric_limits<double>::quiet_NaN();
    auto consider = [&](const std::vector<double>& x) {
      double dg = detail::gamma_distance_d(inst, x);
      // residuals below the rounding noise of the double-precision map
      // evaluation would produce spurious huge ratios
      if (dg < 1e-12 * r) return;
      double ratio = dx(x) / dg;
      if (std::isnan(sup) || ratio > sup) {
        sup = ratio;
        argmax[j] = x;
      }
    };
    for (const auto& d : grid_dirs) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = xb[i] + r * d[i];
      consider(x);
    }
    for (int s = 0; s < cfg.samples_per_radius; ++s) {
      std::seed_seq ss{(std::uint32_t)(cfg.seed & 0xffffffffu),
                       (std::uint32_t)(cfg.seed >> 32), (std::uint32_t)j,
                       (std::uint32_t)s};
      std::mt19937_64 rng(ss);
      std::uniform_real_distribution<double> uni(-1.0, 1.0);
      std::vector<double> x(n);
      double m = 0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = uni(rng);
        m = std::max(m, std::abs(x[i]));
      }
      if (m < 1e-9) continue;
      // rescale onto the annulus ||x - xb||_inf in [r/2, r]: the ratio at
      // scale r is what the error bound quantifies, and interior samples at
      // much smaller scales would contaminate the per-radius statistic
      double scale = (0.75 + 0.25 * uni(rng)) * r / m;
      for (std::size_t i = 0; i < n; ++i) x[i] = xb[i] + scale * x[i];
      consider(x);
    }
    res.sup_ratio.push_back(sup);
    if (!std::isnan(sup)) res.kappa_hat = std::max(res.kappa_hat, sup);
  }

  // least-squares slope over the finest valid radii
  std::vector<std::pair<double, double>> pts;
  for (int j = cfg.num_radii - 1; j >= 0 && (int)pts.size() < cfg.slope_window;
       --j) {
    double rho = res.sup_ratio[j];
    if (!std::isnan(rho) && rho > 0 && std::isfinite(rho))
      pts.push_back({std::log(res.radii[j]), std::log(rho)});
  }
  if ((int)pts.size() < cfg.slope_window) {
    res.verdict = ProbeVerdict::Inconclusive;
    return res;
  }
  double mx = 0, my = 0;
  for (auto& [a, b] : pts) mx += a, my += b;
  mx /= pts.size();
  my /= pts.size();
  double num = 0, den = 0;
  for (auto& [a, b] : pts) num += (a - mx) * (b - my), den += (a - mx) * (a - mx);
  res.slope = num / den;
  if (res.slope <= cfg.divergence_threshold) {
    res.verdict = ProbeVerdict::DivergenceSuspected;
    for (int j = cfg.num_radii - 1; j >= 0 && (int)res.witness_points.size() < 3;
         --j)
      if (!argmax[j].empty()) {
        res.witness_points.push_back(argmax[j]);
        res.witness_ratios.push_back(res.sup_ratio[j]);
      }
  } else {
    res.verdict = ProbeVerdict::Bounded;
  }
  return res;
}

// ---------------------------------------------------------------------------

struct WitnessSearchResult {
  bool found = false;
  WitnessSequence seq;
};

/// Searches for a sequence x^k -> xbar along which every active block of the
/// multiplier satisfies <lambda_nu, F_nu(x^k) - F_nu(xbar)> > 0.  Directions
/// come from a small integer grid with per-coordinate radius exponents; a
/// candidate is accepted if the strict inequalities hold on at least three
/// consecutive radii (exact rationals when F is polynomial).
inline WitnessSearchResult witness_search(const GmpInstance& inst,
                                          const QVec& lambda,
                                          const MultiIndex& delta,
                                          const std::optional<QVec>& u,
                                          const ProbeConfig& cfg) {
  const std::size_t n = inst.F.n;
  const bool exact = inst.F.all_polynomial();
  QVec ybar = inst.F.eval(inst.xbar);
  std::vector<double> xbd, ybard;
  for (const auto& c : inst.xbar) xbd.push_back(to_double(c));
  if (!exact) ybard = inst.F.eval_d(xbd);

  std::vector<std::size_t> active;
  for (std::size_t b = 0; b < delta.blocks(); ++b) {
    bool nz = false;
    for (std::size_t i = 0; i < delta.parts[b]; ++i)
      if (lambda[delta.block_offset(b) + i] != 0) nz = true;
    if (nz) active.push_back(b);
  }
  if (active.empty()) return {};

  auto block_value = [&](const QVec& x, std::size_t b) {
    QVec fx = inst.F.eval(x);
    Rational v(0);
    for (std::size_t i = 0; i < delta.parts[b]; ++i) {
      std::size_t k = delta.block_offset(b) + i;
      v += lambda[k] * (fx[k] - ybar[k]);
    }
    return v;
  };
  auto block_value_d = [&](const std::vector<double>& x, std::size_t b) {
    auto fx = inst.F.eval_d(x);
    double v = 0;
    for (std::size_t i = 0; i < delta.parts[b]; ++i) {
      std::size_t k = delta.block_offset(b) + i;
      v += to_double(lambda[k]) * (fx[k] - ybard[k]);
    }
    return v;
  };

  WitnessSearchResult out;
  std::vector<std::vector<int>> dirs, exps;
  int dir_hi = (n <= 3) ? 2 : 1;
  detail::enumerate_grid(n, -dir_hi, dir_hi, [&](const std::vector<int>& v) {
    if (std::all_of(v.begin(), v.end(), [](int c) { return c == 0; })) return;
    dirs.push_back(v);
  });
  if (n <= 3) {
    detail::enumerate_grid(n, 1, 3,
                           [&](const std::vector<int>& e) { exps.push_back(e); });
  } else {
    exps.push_back(std::vector<int>(n, 1));
  }

  for (const auto& e : exps)
    for (const auto& v : dirs) {
      if (u) {
        // the limit direction is carried by the coordinates with the
        // smallest exponent; it must match the requested direction
        int emin = *std::min_element(e.begin(), e.end());
        QVec lim(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
          if (e[i] == emin) lim[i] = Rational(v[i]);
        if (is_zero(lim)) continue;
        // lim parallel to u with positive orientation
        QVec pu = primitive(*u), pl = primitive(lim);
        if (pu != pl) continue;
      }
      auto point = [&](int k) {
        Rational t = cfg.witness_t0 / Rational(Int(1) << k);
        QVec x = inst.xbar;
        for (std::size_t i = 0; i < n; ++i) {
          Rational ti(1);
          for (int q = 0; q < e[i]; ++q) ti *= t;
          x[i] += ti * Rational(v[i]);
        }
        return x;
      };
      int run = 0, run_start = -1;
      for (int k = 0; k < cfg.witness_depth && run < 3; ++k) {
        bool ok = true;
        QVec x = point(k);
        if (exact) {
          for (std::size_t b : active)
            if (!(block_value(x, b) > 0)) ok = false;
        } else {
          std::vector<double> xd;
          for (const auto& c : x) xd.push_back(to_double(c));
          for (std::size_t b : active)
            if (!(block_value_d(xd, b) > 1e-9)) ok = false;
        }
        if (ok) {
          if (run == 0) run_start = k;
          ++run;
        } else {
          run = 0;
        }
      }
      if (run < 3) continue;
      out.found = true;
      auto& s = out.seq;
      s.lambda = lambda;
      s.direction = QVec();
      for (int c : v) s.direction.push_back(Rational(c));
      s.exponents = e;
      s.t0 = cfg.witness_t0 / Rational(Int(1) << run_start);
      s.active_blocks = active;
      s.exact = exact;
      for (int k = run_start; k < run_start + 3; ++k) {
        QVec x = point(k);
        if (exact) {
          std::vector<Rational> vals;
          for (std::size_t b : active) vals.push_back(block_value(x, b));
          s.values.push_back(std::move(vals));
        } else {
          std::vector<double> xd;
          for (const auto& c : x) xd.push_back(to_double(c));
          std::vector<double> vals;
          for (std::size_t b : active) vals.push_back(block_value_d(xd, b));
          s.values_approx.push_back(std::move(vals));
        }
        s.points.push_back(std::move(x));
      }
      return out;
    }
  return out;
}

// ---------------------------------------------------------------------------

struct PenaltyProbeResult {
  std::vector<double> alphas;
  std::vector<double> min_margin;  // min sampled P_a(x) - P_a(xbar), finest radii
  std::optional<double> exact_alpha;  // smallest alpha with nonnegative margin
};

/// Samples the penalty P_a = f + a * d(F(.)) around xbar on the two finest
/// radii of the ladder and reports, per alpha, the worst margin against
/// P_a(xbar); a nonnegative margin suggests the penalty is exact at alpha.
inline PenaltyProbeResult penalty_probe(const GmpInstance& inst,
                                        const ProbeConfig& cfg,
                                        Norm norm = Norm::L2,
                                        std::vector<double> alphas = {}) {
  if (!inst.objective) throw MissingObjectiveError();
  if (alphas.empty())
    for (int i = 0; i <= 10; ++i) alphas.push_back(std::pow(2.0, i));
  std::size_t n = inst.F.n;
  std::vector<double> xb;
  for (const auto& c : inst.xbar) xb.push_back(to_double(c));
  auto dist = [&](const std::vector<double>& x) {
    if (norm == Norm::L2) return detail::gamma_distance_d(inst, x);
    QVec y;
    for (double c : inst.F.eval_d(x)) y.push_back(rat_from_double(c));
    if (!inst.gamma) throw AnalyticGammaError();
    if (norm == Norm::L1 && !inst.gamma->interval_data.empty())
      return to_double(block_l1_linf_distance(*inst.gamma, y));
    return to_double(distance_to_gamma(*inst.gamma, y, norm).value);
  };
  double f0 = inst.objective->eval_d(xb)[0];

  PenaltyProbeResult res;
  res.alphas = alphas;
  for (double a : alphas) {
    double worst = std::numeric_limits<double>::infinity();
    for (int j = cfg.num_radii - 2; j < cfg.num_radii; ++j) {
      double r = cfg.r0 * std::pow(2.0, -j);
      for (int s = 0; s < cfg.samples_per_radius; ++s) {
        std::seed_seq ss{(std::uint32_t)(cfg.seed & 0xffffffffu),
                         (std::uint32_t)(cfg.seed >> 32), (std::uint32_t)(j + 1000),
                         (std::uint32_t)s};
        std::mt19937_64 rng(ss);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = xb[i] + r * uni(rng);
        double pa = inst.objective->eval_d(x)[0] + a * dist(x);
        worst = std::min(worst, pa - f0);
      }
    }
    res.min_margin.push_back(worst);
    if (!res.exact_alpha && worst >= -1e-12) res.exact_alpha = a;
  }
  return res;
}

}  // namespace cqlab

#endif
