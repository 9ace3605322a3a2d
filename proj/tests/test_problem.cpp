#include "catch_amalgamated.hpp"

#include <random>

#include "cqlab/problem.hpp"

using namespace cqlab;

namespace {

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

}  // namespace

TEST_CASE("expression parsing and polynomial lowering") {
  SmoothMap m = SmoothMap::from_expressions(1, {"x1 + x1^2"});
  REQUIRE(m.polys[0].has_value());
  const Poly& p = *m.polys[0];
  CHECK(p.terms.at({1}) == Rational(1));
  CHECK(p.terms.at({2}) == Rational(1));

  SmoothMap s = SmoothMap::from_expressions(1, {"sin(x1)"});
  CHECK(!s.polys[0].has_value());

  try {
    SmoothMap::from_expressions(1, {"x1 + + 2"});
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 5);
  }
  CHECK_THROWS_AS(SmoothMap::from_expressions(1, {"tanh(x1)"}),
                  UnknownFunctionError);
  CHECK_THROWS_AS(SmoothMap::from_expressions(1, {"x2"}), SyntaxError);
}

TEST_CASE("jacobians on both paths") {
  // F = (x, -x^2)
  SmoothMap m = SmoothMap::from_expressions(1, {"x1", "-x1^2"});
  QMat j = m.jacobian(qv({0}));
  CHECK(j[0][0] == Rational(1));
  CHECK(j[1][0] == Rational(0));
  // F = (x, sin x): expression path, exact at 0
  SmoothMap s = SmoothMap::from_expressions(1, {"x1", "sin(x1)"});
  QMat js = s.jacobian(qv({0}));
  CHECK(js[0][0] == Rational(1));
  CHECK(js[1][0] == Rational(1));
}

TEST_CASE("scalarized hessian and higher partials") {
  // F3 = a x1^2 + b x1^4 + c x2^2 + d x2^4 with a=2, b=-1, c=3, d=5
  SmoothMap m = SmoothMap::from_expressions(
      2, {"x1", "x2", "2*x1^2 - x1^4 + 3*x2^2 + 5*x2^4"});
  QVec lam = qv({0, 0, 1});
  QMat h = m.hessian_scalarized(lam, qv({0, 0}));
  CHECK(h[0][0] == Rational(4));   // 2*a
  CHECK(h[1][1] == Rational(6));   // 2*c
  CHECK(h[0][1] == Rational(0));
  CHECK(m.higher_partial(lam, {4, 0}, qv({0, 0})) == Rational(-24));  // 24*b
  CHECK(m.higher_partial(lam, {0, 4}, qv({0, 0})) == Rational(120));  // 24*d
  // expression path refuses order >= 3
  SmoothMap s = SmoothMap::from_expressions(1, {"sin(x1)"});
  CHECK_THROWS_AS(s.higher_partial(qv({1}), {3}, qv({0})), OrderCapError);
}

TEST_CASE("polynomial and expression paths agree on polynomial sources") {
  std::mt19937_64 rng(314159);
  SmoothMap m = SmoothMap::from_expressions(
      2, {"x1^3 - 2*x1*x2 + 1/2*x2^2", "x2 - x1"});
  for (int k = 0; k < 100; ++k) {
    QVec x = {Rational(static_cast<long>(rng() % 9) - 4, 1 + rng() % 4),
              Rational(static_cast<long>(rng() % 9) - 4, 1 + rng() % 4)};
    // exact value from the lowered polynomial
    QVec y = m.eval(x);
    const Poly& p0 = *m.polys[0];
    CHECK(y[0] == p0.eval(x));
    // jet gradient matches exact partials (values here are dyadic-exact only
    // for dyadic x, so compare through doubles)
    std::vector<double> xd = {to_double(x[0]), to_double(x[1])};
    Jet2 jet = eval_jet2(m.components[0], xd);
    for (std::size_t i = 0; i < 2; ++i)
      CHECK_THAT(jet.g[i], Catch::Matchers::WithinAbs(
                               to_double(partial(p0, i).eval(x)), 1e-9));
  }
}

TEST_CASE("expression derivatives match finite differences") {
  SmoothMap s = SmoothMap::from_expressions(2, {"sin(x1)*exp(x2) - cos(x1*x2)"});
  std::vector<double> x = {0.3, -0.7};
  Jet2 jet = eval_jet2(s.components[0], x);
  for (double h : {1e-3, 1e-4}) {
    for (std::size_t i = 0; i < 2; ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (eval_value(s.components[0], xp) -
                   eval_value(s.components[0], xm)) /
                  (2 * h);
      CHECK_THAT(jet.g[i], Catch::Matchers::WithinAbs(fd, 10 * h * h));
    }
  }
}

TEST_CASE("prototype sets") {
  auto cc = prototype_set(Prototype::CC, 1);
  CHECK(cc.ortho_flag);
  CHECK(cc.pieces.size() == 2);
  CHECK(set_contains(cc, qv({3, 0})));
  CHECK(set_contains(cc, qv({0, 3})));
  CHECK(!set_contains(cc, qv({1, 1})));
  CHECK(!set_contains(cc, qv({-1, 0})));

  auto sc = prototype_set(Prototype::SC, 1);
  CHECK(set_contains(sc, qv({-5, 0})));
  CHECK(set_contains(sc, qv({0, -5})));
  CHECK(!set_contains(sc, qv({1, -1})));

  auto rcc = prototype_set(Prototype::rCC, 1);
  CHECK(set_contains(rcc, qv({-7, 0})));
  CHECK(set_contains(rcc, qv({0, 1})));
  CHECK(!set_contains(rcc, qv({0, 2})));

  auto vc = prototype_set(Prototype::VC, 1);
  CHECK(set_contains(vc, qv({-1, 2})));
  CHECK(set_contains(vc, qv({3, 0})));
  CHECK(!set_contains(vc, qv({1, 1})));

  auto rpc = prototype_set(Prototype::rPC, 1);
  CHECK(set_contains(rpc, qv({-1, 1})));
  CHECK(!set_contains(rpc, qv({-1, 2})));
  CHECK(set_contains(rpc, qv({2, 0})));

  auto nlp = prototype_set(Prototype::NLP, 1, 1, 3);
  CHECK(set_contains(nlp, qv({0, -1, -2})));
  CHECK(!set_contains(nlp, qv({1, -1, -2})));
  CHECK(!set_contains(nlp, qv({0, 1, 0})));

  auto cc2 = prototype_set(Prototype::CC, 2);
  CHECK(cc2.pieces.size() == 4);
  CHECK(cc2.dim == 4);
  CHECK(set_contains(cc2, qv({1, 0, 0, 2})));
}

TEST_CASE("admissible multi-indices") {
  auto cc = prototype_set(Prototype::CC, 1);
  CHECK(is_admissible(cc, delta_p(2)));
  CHECK(is_admissible(cc, delta_q(2)));

  DisjunctiveSet half;  // {y2 >= y1}: single non-axis-aligned polyhedron
  half.dim = 2;
  HPoly p;
  p.dim = 2;
  p.ineq = {qv({1, -1})};
  p.ineq_rhs = {Rational(0)};
  half.pieces.push_back(p);
  CHECK(is_admissible(half, delta_p(2)));
  CHECK(!is_admissible(half, delta_q(2)));
  CHECK(admissible_multi_indices(half).size() == 1);

  // product of an ortho block and a non-ortho block
  auto prod = product_set(cc, half);
  auto adm = admissible_multi_indices(prod);
  bool has_finest = false;
  for (const auto& m : adm)
    has_finest = has_finest || m == MultiIndex{{1, 1, 2}};
  CHECK(has_finest);
  CHECK(is_admissible(prod, MultiIndex{{2, 2}}));
  CHECK(is_admissible(prod, MultiIndex{{1, 1, 2}}));
  CHECK(is_admissible(prod, delta_p(4)));
  CHECK(!is_admissible(prod, delta_q(4)));
  CHECK(!is_admissible(prod, MultiIndex{{2, 1, 1}}));
}

TEST_CASE("refinement relation") {
  CHECK(refine(MultiIndex{{1, 3, 1, 1, 1}}, MultiIndex{{1, 4, 2}}));
  CHECK(!refine(MultiIndex{{1, 4, 2}}, MultiIndex{{1, 3, 1, 1, 1}}));
  // deltaQ refines (2,1) refines deltaP in d = 3
  CHECK(refine(delta_q(3), MultiIndex{{2, 1}}));
  CHECK(refine(MultiIndex{{2, 1}}, delta_p(3)));
  CHECK(refine(delta_p(3), delta_p(3)));
  CHECK(!refine(MultiIndex{{2, 2}}, MultiIndex{{3, 1}}));
  // support picks nonzero blocks
  auto s = support(delta_q(2), qv({0, -1}));
  REQUIRE(s.size() == 1);
  CHECK(s[0] == 1);
  auto s2 = support(MultiIndex{{2, 1}}, qv({0, -1, 0}));
  REQUIRE(s2.size() == 1);
  CHECK(s2[0] == 0);
}

TEST_CASE("instance construction checks feasibility") {
  SmoothMap F = SmoothMap::from_expressions(1, {"x1", "-x1^2"});
  DisjunctiveSet g;  // {y2 >= |y1|}
  g.dim = 2;
  HPoly p;
  p.dim = 2;
  p.ineq = {qv({1, -1}), qv({-1, -1})};
  p.ineq_rhs = {Rational(0), Rational(0)};
  g.pieces.push_back(p);
  CHECK_NOTHROW(make_instance(F, g, qv({0})));
  CHECK_THROWS_AS(make_instance(F, g, qv({1})), InfeasiblePointError);
  GmpInstance inst = make_instance(F, g, qv({0}));
  CHECK_NOTHROW(inst.disjunctive());
}

TEST_CASE("analytic registry") {
  const auto& reg = analytic_registry();
  const auto& pw = reg.at("power32_epigraph");
  CHECK(pw.member({0.0, 0.0}));
  CHECK(pw.member({1.0, 1.0}));
  CHECK(!pw.member({1.0, 0.5}));
  CHECK(pw.distance({0.0, 1.0}) == 0.0);
  // point straight below the curve at x=0: distance to the origin region
  double dist = pw.distance({0.0, -1.0});
  CHECK_THAT(dist, Catch::Matchers::WithinAbs(1.0, 1e-3));
  const auto& pb = reg.at("parabola_hypograph");
  CHECK(pb.member({2.0, 4.0}));
  CHECK(!pb.member({0.0, 1.0}));
  CHECK_THAT(pb.distance({0.0, 1.0}), Catch::Matchers::WithinAbs(0.5 * std::sqrt(3.0), 1e-2));
}

TEST_CASE("problem file parsing") {
  std::string text = R"(
# a complementarity example
[problem]
n = 2
d = 2

[map]
F1 = x1
F2 = x2

[gamma]
prototype = CC
copies = 1

[point]
x = 0 0

[objective]
f = x1 + x2
)";
  GmpInstance inst = parse_problem(text);
  CHECK(inst.F.n == 2);
  CHECK(inst.F.d == 2);
  CHECK(inst.gamma.has_value());
  CHECK(inst.gamma->ortho_flag);
  CHECK(inst.objective.has_value());

  std::string explicit_gamma = R"(
[problem]
n = 1
d = 2
[map]
F1 = x1
F2 = -x1^2
[gamma]
piece = 1 -1 <= 0 ; -1 -1 <= 0
[point]
x = 0
)";
  GmpInstance abs_inst = parse_problem(explicit_gamma);
  REQUIRE(abs_inst.gamma.has_value());
  CHECK(abs_inst.gamma->pieces.size() == 1);
  CHECK(abs_inst.gamma->pieces[0].ineq.size() == 2);

  std::string analytic = R"(
[problem]
n = 1
d = 2
[map]
F1 = x1
F2 = x1^2
[gamma]
analytic = power32_epigraph
[point]
x = 0
)";
  GmpInstance an = parse_problem(analytic);
  CHECK(!an.gamma.has_value());
  REQUIRE(an.analytic_gamma.has_value());
  CHECK_THROWS_AS(an.disjunctive(), AnalyticGammaError);

  CHECK_THROWS_AS(parse_problem("[problem]\nbogus = 1\n"), ProblemParseError);
  CHECK_THROWS_AS(parse_problem("[problem]\nn = 1\nd = 1\n[map]\nF1 = x1\n"
                                "[gamma]\nprototype = XX\n[point]\nx = 0\n"),
                  ProblemParseError);
}

TEST_CASE("rational point feasibility with fractions") {
  std::string text = R"(
[problem]
n = 1
d = 2
[map]
F1 = x1 - 1/2
F2 = 0
[gamma]
prototype = SC
[point]
x = 1/2
)";
  GmpInstance inst = parse_problem(text);
  CHECK(inst.xbar[0] == Rational(1, 2));
}
