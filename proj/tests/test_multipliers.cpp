#include "catch_amalgamated.hpp"

#include <random>

#include "cqlab/multipliers.hpp"

using namespace cqlab;

namespace {

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

DisjunctiveSet abs_epigraph() {
  DisjunctiveSet s;
  s.dim = 2;
  HPoly p;
  p.dim = 2;
  p.ineq = {qv({1, -1}), qv({-1, -1})};
  p.ineq_rhs = {Rational(0), Rational(0)};
  s.pieces.push_back(p);
  return s;
}

// F = (x, -x^2), Gamma = {y2 >= |y1|}, xbar = 0
GmpInstance kinked_instance() {
  return make_instance(SmoothMap::from_expressions(1, {"x1", "-x1^2"}),
                       abs_epigraph(), qv({0}));
}

// F = (-x, x + x^2), Gamma = R- x R-, xbar = 0
GmpInstance two_sided_instance() {
  auto le0 = Interval{std::nullopt, Rational(0)};
  return make_instance(SmoothMap::from_expressions(1, {"-x1", "x1 + x1^2"}),
                       ortho_set(2, {{le0, le0}}), qv({0}));
}

// F = (x1, x2, a x1^2 + b x1^4 + c x2^2 + d x2^4), Gamma = R x {y3 <= -|y2|}
GmpInstance quartic_instance(long a, long b, long c, long d) {
  auto num = [](long v) { return std::to_string(v); };
  std::string f3 = num(a) + "*x1^2 + " + num(b) + "*x1^4 + " + num(c) +
                   "*x2^2 + " + num(d) + "*x2^4";
  DisjunctiveSet g;
  g.dim = 3;
  HPoly p;
  p.dim = 3;
  p.ineq = {qv({0, 1, 1}), qv({0, -1, 1})};
  p.ineq_rhs = {Rational(0), Rational(0)};
  g.pieces.push_back(p);
  return make_instance(SmoothMap::from_expressions(2, {"x1", "x2", f3}), g,
                       qv({0, 0}));
}

bool is_single_ray(const MultiplierSet& m, const QVec& ray) {
  if (m.empty) return false;
  VCone expect;
  expect.dim = ray.size();
  expect.rays = {ray};
  if (m.cone.pieces.size() != 1) return false;
  return cone_equal(m.cone.pieces[0].second, expect);
}

}  // namespace

TEST_CASE("multiplier cone of the kinked fixture") {
  auto inst = kinked_instance();
  auto l0 = lambda0(inst);
  CHECK(is_single_ray(l0, qv({0, -1})));
  // every nonzero tangent direction kills the directional cone
  CHECK(lambda0_directional(inst, qv({1})).empty);
  CHECK(lambda0_directional(inst, qv({-1})).empty);
  // u = 0 gives back the standard cone
  auto l00 = lambda0_directional(inst, qv({0}));
  CHECK(is_single_ray(l00, qv({0, -1})));
}

TEST_CASE("multiplier cone of the two-sided fixture") {
  auto inst = two_sided_instance();
  auto l0 = lambda0(inst);
  CHECK(is_single_ray(l0, qv({1, 1})));
}

TEST_CASE("multiplier cone of the quartic family") {
  for (long a : {-1L, 0L, 1L}) {
    auto inst = quartic_instance(a, 0, 0, 0);
    auto l0 = lambda0(inst);
    CHECK(is_single_ray(l0, qv({0, 0, 1})));
    auto lu = lambda0_directional(inst, qv({1, 0}));
    CHECK(is_single_ray(lu, qv({0, 0, 1})));
    auto lmu = lambda0_directional(inst, qv({-1, 0}));
    CHECK(is_single_ray(lmu, qv({0, 0, 1})));
  }
}

TEST_CASE("direction classes of the kinked fixture") {
  auto inst = kinked_instance();
  auto da = direction_classes(inst);
  // apex, two edges, interior
  CHECK(da.classes.size() == 4);
  // no class admits a nonzero pullback direction: the map sends u to (u, 0),
  // which never enters the tangent cone except at u = 0
  for (const auto& dc : da.classes) CHECK(!dc.pullback_witness.has_value());
}

TEST_CASE("direction classes of the quartic family") {
  auto inst = quartic_instance(0, 0, -1, 1);
  auto da = direction_classes(inst);
  // the class of (1,0,0) pulls back to u = (1,0) with multiplier ray e3
  QVec d = qv({1, 0, 0});
  auto ci = classify_direction(da, d);
  REQUIRE(ci.has_value());
  const auto& dc = da.classes[*ci];
  REQUIRE(dc.pullback_witness.has_value());
  CHECK(is_single_ray(dc.multipliers, qv({0, 0, 1})));
}

TEST_CASE("direction classes partition the tangent cone") {
  std::mt19937_64 rng(77007);
  auto le0 = Interval{std::nullopt, Rational(0)};
  auto ge0 = Interval{Rational(0), std::nullopt};
  auto zero = Interval{Rational(0), Rational(0)};
  std::vector<GmpInstance> insts;
  insts.push_back(kinked_instance());
  insts.push_back(two_sided_instance());
  insts.push_back(make_instance(
      SmoothMap::from_expressions(2, {"x1", "x2"}),
      ortho_set(2, {{ge0, zero}, {zero, ge0}}), qv({0, 0})));
  for (const auto& inst : insts) {
    auto da = direction_classes(inst);
    QVec ybar = inst.F.eval(inst.xbar);
    for (int k = 0; k < 200; ++k) {
      QVec d(da.tangent_set.dim);
      for (auto& c : d) c = Rational(static_cast<long>(rng() % 9) - 4, 1 + rng() % 3);
      if (!set_contains(da.tangent_set, d)) continue;
      auto ci = classify_direction(da, d);
      REQUIRE(ci.has_value());
      // the class value must equal the directional cone at d itself
      auto nd = directional_limiting_normal_cone(inst.disjunctive(), ybar, d);
      CHECK(union_equal(nd, da.classes[*ci].normal_value));
      // signature matching is exclusive by construction: check witness region
      const auto& dc = da.classes[*ci];
      auto alt = classify_direction(da, dc.dir_witness);
      REQUIRE(alt.has_value());
      CHECK(*alt == *ci);
    }
  }
}

TEST_CASE("directional multipliers contained in standard ones") {
  std::vector<GmpInstance> insts;
  insts.push_back(kinked_instance());
  insts.push_back(two_sided_instance());
  insts.push_back(quartic_instance(1, 2, -1, 0));
  std::mt19937_64 rng(5511);
  for (const auto& inst : insts) {
    auto l0 = lambda0(inst);
    for (int k = 0; k < 20; ++k) {
      QVec u(inst.F.n);
      for (auto& c : u) c = Rational(static_cast<long>(rng() % 7) - 3);
      auto lu = lambda0_directional(inst, u);
      if (lu.empty) continue;
      for (const auto& [h, v] : lu.cone.pieces) {
        for (const auto& r : v.rays) CHECK(l0.cone.contains(r));
        for (const auto& l : v.lineality) {
          CHECK(l0.cone.contains(l));
          CHECK(l0.cone.contains(-l));
        }
      }
      // positive scaling invariance
      QVec u3 = Rational(3) * u;
      auto lu3 = lambda0_directional(inst, u3);
      CHECK(lu.empty == lu3.empty);
      if (!lu.empty) CHECK(union_equal(lu.cone, lu3.cone));
    }
  }
}

TEST_CASE("m-stationarity on the kinked fixture") {
  auto inst = make_instance(SmoothMap::from_expressions(1, {"x1", "-x1^2"}),
                            abs_epigraph(), qv({0}),
                            SmoothMap::from_expressions(1, {"x1"}));
  auto r = m_stationarity(inst);
  REQUIRE(r.stationary);
  // grad f + grad F^T lambda = 0 and lambda in the normal cone
  QMat jac = inst.F.jacobian(inst.xbar);
  Rational resid = Rational(1) + jac[0][0] * r.lambda[0] + jac[1][0] * r.lambda[1];
  CHECK(resid == 0);
  CHECK(r.lambda[1] <= -rat_abs(r.lambda[0]));
}

TEST_CASE("m-stationarity range obstruction") {
  auto le0 = Interval{std::nullopt, Rational(0)};
  auto inst = make_instance(SmoothMap::from_expressions(2, {"x1", "0"}),
                            ortho_set(2, {{le0, le0}}), qv({-1, 0}),
                            SmoothMap::from_expressions(2, {"x2"}));
  auto r = m_stationarity(inst);
  CHECK(!r.stationary);
}

TEST_CASE("m-stationarity sign pattern on complementarity instances") {
  auto cc = prototype_set(Prototype::CC, 1);
  auto inst = make_instance(SmoothMap::from_expressions(2, {"x1", "x2"}), cc,
                            qv({0, 0}), SmoothMap::from_expressions(2, {"x1"}));
  auto r = m_stationarity(inst);
  REQUIRE(r.stationary);
  CHECK(r.mpcc_pattern_checked);
  CHECK(r.mpcc_pattern_ok);
  CHECK_THROWS_AS(
      m_stationarity(make_instance(SmoothMap::from_expressions(2, {"x1", "x2"}),
                                   cc, qv({0, 0}))),
      MissingObjectiveError);
}

TEST_CASE("m-stationarity agrees with piece enumeration on random instances") {
  std::mt19937_64 rng(246810);
  for (int inst_i = 0; inst_i < 20; ++inst_i) {
    std::size_t copies = 1 + rng() % 2;
    auto g = prototype_set(Prototype::CC, copies);
    std::size_t d = 2 * copies;
    // F = affine map with random integer matrix, xbar mapping to 0
    std::vector<std::string> comps;
    std::size_t n = d;
    for (std::size_t i = 0; i < d; ++i) {
      std::string e;
      for (std::size_t j = 0; j < n; ++j) {
        long c = static_cast<long>(rng() % 5) - 2;
        if (!e.empty()) e += " + ";
        e += std::to_string(c) + "*x" + std::to_string(j + 1);
      }
      comps.push_back(e);
    }
    std::string obj;
    for (std::size_t j = 0; j < n; ++j) {
      long c = static_cast<long>(rng() % 5) - 2;
      if (!obj.empty()) obj += " + ";
      obj += std::to_string(c) + "*x" + std::to_string(j + 1);
    }
    GmpInstance gi = make_instance(SmoothMap::from_expressions(n, comps), g,
                                   QVec(n, Rational(0)),
                                   SmoothMap::from_expressions(n, {obj}));
    auto r = m_stationarity(gi);
    // brute force: try every normal-cone piece explicitly
    auto normal = limiting_normal_cone(g, QVec(d, Rational(0)));
    QMat jac = gi.F.jacobian(gi.xbar);
    QVec gradf = gi.objective->jacobian(gi.xbar)[0];
    bool any = false;
    for (const auto& [h, v] : normal.pieces) {
      LinProg p;
      p.nvars = d;
      for (std::size_t k = 0; k < n; ++k) {
        QVec row(d);
        for (std::size_t i = 0; i < d; ++i) row[i] = jac[i][k];
        p.eq_lhs.push_back(row);
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
      if (lp_solve(p).status == LpStatus::Optimal) any = true;
    }
    CHECK(r.stationary == any);
  }
}
