#include "catch_amalgamated.hpp"

#include <random>

#include "cqlab/fixtures.hpp"
#include "cqlab/oracle.hpp"

using namespace cqlab;

namespace {

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

}  // namespace

TEST_CASE("exact l2 distance on a complementarity set") {
  auto cc = prototype_set(Prototype::CC, 1);
  auto d = distance_to_gamma(cc, qv({3, 4}));
  REQUIRE(d.squared);
  CHECK(d.value == Rational(9));
  CHECK(distance_to_gamma(cc, qv({-1, -2})).value == Rational(5));
  CHECK(distance_to_gamma(cc, qv({5, 0})).value == Rational(0));
}

TEST_CASE("exact l2 distance to a halfplane") {
  DisjunctiveSet s;
  s.dim = 2;
  HPoly p;
  p.dim = 2;
  p.ineq = {qv({1, -1})};
  p.ineq_rhs = {Rational(0)};
  s.pieces.push_back(p);
  CHECK(distance_to_gamma(s, qv({1, 0})).value == Rational(1, 2));
  CHECK(distance_to_gamma(s, qv({0, 1})).value == Rational(0));
}

TEST_CASE("distance is zero exactly on members") {
  std::vector<DisjunctiveSet> sets = {prototype_set(Prototype::CC, 1),
                                      detail::abs_epigraph_set(),
                                      detail::wedge3_set()};
  std::mt19937_64 rng(424242);
  for (const auto& s : sets) {
    for (int k = 0; k < 10000; ++k) {
      QVec y(s.dim);
      for (auto& c : y)
        c = Rational(static_cast<long>(rng() % 41) - 20, 1 + rng() % 7);
      bool member = set_contains(s, y);
      CHECK((distance_to_gamma(s, y).value == 0) == member);
    }
  }
}

TEST_CASE("l1 and linf distances to a box") {
  auto unit = Interval{Rational(0), Rational(1)};
  auto box = ortho_set(2, {{unit, unit}});
  CHECK(distance_to_gamma(box, qv({2, 3}), Norm::L1).value == Rational(3));
  CHECK(distance_to_gamma(box, qv({2, 3}), Norm::Linf).value == Rational(2));
  QVec y = {Rational(2), Rational(1, 2)};
  CHECK(distance_to_gamma(box, y, Norm::L1).value == Rational(1));
  CHECK(distance_to_gamma(box, y, Norm::Linf).value == Rational(1));
}

TEST_CASE("exact distance agrees with a dense feasible grid") {
  std::mt19937_64 rng(1337);
  for (int trial = 0; trial < 20; ++trial) {
    DisjunctiveSet s;
    s.dim = 2;
    for (int pc = 0; pc < 2; ++pc) {
      HPoly p;
      p.dim = 2;
      for (int r = 0; r < 3; ++r) {
        QVec a(2);
        for (auto& c : a) c = Rational(static_cast<long>(rng() % 5) - 2);
        if (is_zero(a)) a[0] = 1;
        p.ineq.push_back(a);
        p.ineq_rhs.push_back(Rational(1 + static_cast<long>(rng() % 2)));
      }
      s.pieces.push_back(std::move(p));
    }
    QVec y(2);
    for (auto& c : y) c = Rational(static_cast<long>(rng() % 121) - 60, 20);
    double exact = std::sqrt(to_double(distance_to_gamma(s, y).value));
    double brute = std::numeric_limits<double>::infinity();
    for (long i = -120; i <= 120; ++i)
      for (long j = -120; j <= 120; ++j) {
        QVec z = {Rational(i, 20), Rational(j, 20)};
        if (!set_contains(s, z)) continue;
        double dx = to_double(z[0] - y[0]), dy = to_double(z[1] - y[1]);
        brute = std::min(brute, std::sqrt(dx * dx + dy * dy));
      }
    REQUIRE(std::isfinite(brute));  // every piece contains the origin
    CHECK(exact <= brute + 1e-12);
    CHECK(brute <= exact + 0.2);
  }
}

TEST_CASE("probe verdicts on the shipped instances") {
  const auto& kinked = builtin_fixture("kinked-parabola");
  auto r = mscq_probe(kinked.instance, kinked.probe);
  CHECK(r.verdict == ProbeVerdict::Bounded);
  CHECK(r.kappa_hat <= 4.0);
  for (double rho : r.sup_ratio)
    if (!std::isnan(rho)) CHECK(rho <= r.kappa_hat + 1e-12);

  const auto& cusp = builtin_fixture("power-cusp");
  auto rc = mscq_probe(cusp.instance, cusp.probe);
  CHECK(rc.verdict == ProbeVerdict::DivergenceSuspected);
  CHECK(rc.slope >= -0.65);
  CHECK(rc.slope <= -0.35);
  CHECK(rc.witness_points.size() == 3);

  const auto& gap = builtin_fixture("sine-gap");
  auto rg = mscq_probe(gap.instance, gap.probe);
  CHECK(rg.verdict == ProbeVerdict::DivergenceSuspected);
  CHECK(rg.slope >= -2.5);
  CHECK(rg.slope <= -1.5);

  const auto& shadow = builtin_fixture("parabola-shadow");
  auto rs = mscq_probe(shadow.instance, shadow.probe);
  CHECK(rs.verdict == ProbeVerdict::Inconclusive);
}

TEST_CASE("probe is deterministic for a fixed seed") {
  const auto& cusp = builtin_fixture("power-cusp");
  auto a = mscq_probe(cusp.instance, cusp.probe);
  auto b = mscq_probe(cusp.instance, cusp.probe);
  REQUIRE(a.sup_ratio.size() == b.sup_ratio.size());
  for (std::size_t i = 0; i < a.sup_ratio.size(); ++i) {
    if (std::isnan(a.sup_ratio[i]))
      CHECK(std::isnan(b.sup_ratio[i]));
    else
      CHECK(a.sup_ratio[i] == b.sup_ratio[i]);
  }
  CHECK(a.slope == b.slope);
  CHECK(a.kappa_hat == b.kappa_hat);
  ProbeConfig other = cusp.probe;
  other.seed = 99;
  auto c = mscq_probe(cusp.instance, other);
  CHECK(c.verdict == a.verdict);  // verdict robust across seeds
}

TEST_CASE("witness search finds and re-verifies violating sequences") {
  const auto& kinked = builtin_fixture("kinked-parabola");
  MultiIndex dq = delta_q(2);
  auto w = witness_search(kinked.instance, qv({0, -1}), dq, std::nullopt, {});
  REQUIRE(w.found);
  REQUIRE(w.seq.exact);
  REQUIRE(w.seq.points.size() == 3);
  QVec ybar = kinked.instance.F.eval(kinked.instance.xbar);
  for (std::size_t k = 0; k < w.seq.points.size(); ++k) {
    QVec fx = kinked.instance.F.eval(w.seq.points[k]);
    for (std::size_t bi = 0; bi < w.seq.active_blocks.size(); ++bi) {
      std::size_t b = w.seq.active_blocks[bi];
      Rational v(0);
      for (std::size_t i = 0; i < dq.parts[b]; ++i) {
        std::size_t idx = dq.block_offset(b) + i;
        v += w.seq.lambda[idx] * (fx[idx] - ybar[idx]);
      }
      CHECK(v > 0);
      CHECK(v == w.seq.values[k][bi]);
    }
  }

  const auto& two = builtin_fixture("two-sided");
  // both components cannot be strictly violated simultaneously
  auto none = witness_search(two.instance, qv({1, 1}), delta_q(2), std::nullopt, {});
  CHECK(!none.found);
  // but the scalarized combination can
  auto both = witness_search(two.instance, qv({1, 1}), delta_p(2), std::nullopt, {});
  CHECK(both.found);
}

TEST_CASE("blockwise distance equals the complementarity penalty term") {
  for (std::size_t copies : {std::size_t(1), std::size_t(2)}) {
    auto cc = prototype_set(Prototype::CC, copies);
    std::mt19937_64 rng(8800 + copies);
    for (int k = 0; k < 1000; ++k) {
      QVec y(2 * copies);
      for (auto& c : y)
        c = Rational(static_cast<long>(rng() % 21) - 10, 1 + rng() % 4);
      Rational expect(0);
      for (std::size_t i = 0; i < copies; ++i) {
        Rational g = y[2 * i], h = y[2 * i + 1];
        Rational m = g < h ? g : h;
        expect += rat_abs(m);
      }
      CHECK(block_l1_linf_distance(cc, y) == expect);
    }
  }
}

TEST_CASE("penalty probe finds the exact penalty threshold") {
  const auto& cc = builtin_fixture("cc-basic");
  auto r = penalty_probe(cc.instance, cc.probe, Norm::L1);
  REQUIRE(r.exact_alpha.has_value());
  CHECK(*r.exact_alpha == 2.0);  // f = x1 + x2 against sum |min{G_i, H_i}|
}
