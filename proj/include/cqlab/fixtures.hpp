#ifndef CQLAB_FIXTURES_HPP
#define CQLAB_FIXTURES_HPP

#include "cqlab/checkers.hpp"

namespace cqlab {

/// A named instance with its known exact verdicts (where the theory pins them
/// down) and a probe configuration, including a closed-form distance to the
/// feasible set when the grid pool would be unreliable.
struct Fixture {
  std::string name;
  std::string description;
  GmpInstance instance;
  ProbeConfig probe;
  std::map<std::string, Status> expected;  // check name -> exact status
  std::string expected_ladder;             // prefix of the ladder label
  std::optional<ProbeVerdict> expected_probe;
};

namespace detail {

inline QVec qvec(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

inline DisjunctiveSet abs_epigraph_set() {
  DisjunctiveSet s;
  s.dim = 2;
  HPoly p;
  p.dim = 2;
  p.ineq = {qvec({1, -1}), qvec({-1, -1})};
  p.ineq_rhs = {Rational(0), Rational(0)};
  s.pieces.push_back(p);
  return s;
}

inline DisjunctiveSet halfplane_below_diagonal() {  // {y : y1 <= y2}
  DisjunctiveSet s;
  s.dim = 2;
  HPoly p;
  p.dim = 2;
  p.ineq = {qvec({1, -1})};
  p.ineq_rhs = {Rational(0)};
  s.pieces.push_back(p);
  return s;
}

inline DisjunctiveSet wedge3_set() {  // R x {(y2,y3) : y3 <= -|y2|}
  DisjunctiveSet s;
  s.dim = 3;
  HPoly p;
  p.dim = 3;
  p.ineq = {qvec({0, 1, 1}), qvec({0, -1, 1})};
  p.ineq_rhs = {Rational(0), Rational(0)};
  s.pieces.push_back(p);
  return s;
}

inline GmpInstance quartic_instance(long a, long b, long c, long d) {
  auto num = [](long v) { return std::to_string(v); };
  std::string f3 = num(a) + "*x1^2 + " + num(b) + "*x1^4 + " + num(c) +
                   "*x2^2 + " + num(d) + "*x2^4";
  return make_instance(SmoothMap::from_expressions(2, {"x1", "x2", f3}),
                       wedge3_set(), qvec({0, 0}));
}

inline std::string signed_num(long v) {
  return v < 0 ? "m" + std::to_string(-v) : std::to_string(v);
}

/// for identity constraint maps the distance to the feasible set is exactly
/// the distance to the constraint set
inline std::function<double(const std::vector<double>&)> set_distance_override(
    const DisjunctiveSet& g) {
  return [g](const std::vector<double>& x) {
    QVec y;
    for (double c : x) y.push_back(rat_from_double(c));
    return std::sqrt(to_double(distance_to_gamma(g, y).value));
  };
}

}  // namespace detail

inline std::vector<Fixture> builtin_fixtures() {
  using detail::qvec;
  std::vector<Fixture> out;
  auto H = Status::HOLDS;
  auto F = Status::FAILS;

  {
    Fixture f;
    f.name = "kinked-parabola";
    f.description =
        "F = (x, -x^2) against the epigraph of |.|; regularity fails to first "
        "order in the standard sense but holds directionally";
    f.instance = make_instance(SmoothMap::from_expressions(1, {"x1", "-x1^2"}),
                               detail::abs_epigraph_set(), qvec({0}));
    f.probe.feasible_distance_override = [](const std::vector<double>& x) {
      return std::abs(x[0]);
    };
    // the slope stabilizes with a modest budget on this one-dimensional
    // instance; keep the full analysis comfortably under a second
    f.probe.samples_per_radius = 128;
    f.expected = {{"gmfcq", F}, {"foscms", H}, {"soscms", H}, {"pn", F},
                  {"pn_dir", H}, {"qn", F}, {"mscq", H}};
    f.expected_ladder = "SOSCMS";
    f.expected_probe = ProbeVerdict::Bounded;
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "power-cusp";
    f.description =
        "F = (x, x^2) against the epigraph of |.|^(3/2); the error bound "
        "degenerates at rate ~ r^(-1/2)";
    f.instance = make_analytic_instance(
        SmoothMap::from_expressions(1, {"x1", "x1^2"}),
        analytic_registry().at("power32_epigraph"), qvec({0}));
    f.probe.feasible_distance_override = [](const std::vector<double>& x) {
      return std::abs(x[0]);
    };
    f.expected_ladder = "probe";
    f.expected_probe = ProbeVerdict::DivergenceSuspected;
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "two-sided";
    f.description =
        "F = (-x, x + x^2) against the nonpositive orthant; pseudo-normality "
        "fails while quasi-normality holds vacuously";
    auto le0 = Interval{std::nullopt, Rational(0)};
    f.instance = make_instance(SmoothMap::from_expressions(1, {"-x1", "x1 + x1^2"}),
                               ortho_set(2, {{le0, le0}}), qvec({0}));
    f.expected = {{"gmfcq", F}, {"foscms", H}, {"soscms", H}, {"pn", F},
                  {"pn_dir", H}, {"qn", H}, {"mscq", H}};
    f.expected_ladder = "SOSCMS";
    f.expected_probe = ProbeVerdict::Bounded;
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "sine-gap";
    f.description =
        "F = (x, sin x) against {y1 <= y2}; every sufficient condition fails "
        "and the error bound indeed does not hold (rate ~ r^(-2))";
    f.instance = make_instance(SmoothMap::from_expressions(1, {"x1", "sin(x1)"}),
                               detail::halfplane_below_diagonal(), qvec({0}));
    f.probe.feasible_distance_override = [](const std::vector<double>& x) {
      return std::max(x[0], 0.0);
    };
    f.expected = {{"gmfcq", F}, {"foscms", F}, {"soscms", F}, {"pn", F},
                  {"pn_dir", F}};
    f.expected_ladder = "probe";
    f.expected_probe = ProbeVerdict::DivergenceSuspected;
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "parabola-shadow";
    f.description =
        "F = (x, x^4) against the hypograph of the parabola; the point is "
        "interior to the feasible set, so sampling is inconclusive";
    f.instance = make_analytic_instance(
        SmoothMap::from_expressions(1, {"x1", "x1^4"}),
        analytic_registry().at("parabola_hypograph"), qvec({0}));
    f.expected_ladder = "probe";
    f.expected_probe = ProbeVerdict::Inconclusive;
    out.push_back(std::move(f));
  }

  // quartic family against R x {y3 <= -|y2|}: the certifying condition
  // depends delicately on the four coefficients
  struct Cell {
    long a, b, c, d;
    const char* label;
    std::optional<ProbeVerdict> probe;
  };
  const std::vector<Cell> cells = {
      {0, 0, 0, 0, "Robinson SC", ProbeVerdict::Bounded},
      {0, 0, -1, 0, "Polyn. 2nd-OSC", std::nullopt},
      {0, 0, -1, 1, "Pseudo-normality", std::nullopt},
      {0, 0, -1, -1, "Polyn. 4th-OSC", std::nullopt},
      {0, 0, 0, -1, "Polyn. 4th-OSC", std::nullopt},
      {0, 0, 0, 1, "probe", ProbeVerdict::Bounded},
      {0, -1, 0, 0, "Polyn. 4th-OSC", std::nullopt},
      {0, -1, -1, 0, "Polyn. 4th-OSC", std::nullopt},
      {0, -1, 0, 1, "Dir. 4th-OSC", std::nullopt},
      {0, -1, -1, 1, "Pseudo-normality", std::nullopt},
      {0, -1, 0, -1, "4th-OSC", std::nullopt},
      {0, -1, -1, -1, "4th-OSC", std::nullopt},
      {-1, 0, 0, 0, "SOSCMS", ProbeVerdict::Bounded},
      {1, 0, 0, 0, "probe: DIVERGENCE_SUSPECTED",
       ProbeVerdict::DivergenceSuspected},
  };
  for (const auto& c : cells) {
    Fixture f;
    f.name = "quartic-a" + detail::signed_num(c.a) + "-b" +
             detail::signed_num(c.b) + "-c" + detail::signed_num(c.c) + "-d" +
             detail::signed_num(c.d);
    f.description = "F = (x1, x2, a x1^2 + b x1^4 + c x2^2 + d x2^4) against "
                    "R x {y3 <= -|y2|}";
    f.instance = detail::quartic_instance(c.a, c.b, c.c, c.d);
    // closed-form feasible-set distances near the origin
    if (c.a == 0 && c.b == 0) {
      // locally X = R x {0}
      f.probe.feasible_distance_override = [](const std::vector<double>& x) {
        return std::abs(x[1]);
      };
    } else if (c.a > 0 || c.b > 0) {
      // locally X = {0}
      f.probe.feasible_distance_override = [](const std::vector<double>& x) {
        return std::hypot(x[0], x[1]);
      };
    } else if (c.a < 0 && c.b == 0 && c.c == 0 && c.d == 0) {
      // X = {|x2| <= x1^2}
      f.probe.feasible_distance_override = [](const std::vector<double>& x) {
        double u = std::abs(x[0]), v = std::abs(x[1]);
        if (v <= u * u) return 0.0;
        return detail::curve_distance({u, v}, [](double t) { return t * t; });
      };
    }
    f.expected_ladder = c.label;
    f.expected_probe = c.probe;
    out.push_back(std::move(f));
  }

  {
    Fixture f;
    f.name = "cc-basic";
    f.description = "identity map into one complementarity block, linear "
                    "objective; regularity is immediate";
    f.instance = make_instance(SmoothMap::from_expressions(2, {"x1", "x2"}),
                               prototype_set(Prototype::CC, 1), qvec({0, 0}),
                               SmoothMap::from_expressions(2, {"x1 + x2"}));
    f.expected = {{"gmfcq", H}, {"foscms", H}, {"soscms", H}, {"pn", H},
                  {"pn_dir", H}, {"qn", H}, {"mscq", H}};
    f.probe.feasible_distance_override =
        detail::set_distance_override(*f.instance.gamma);
    f.expected_ladder = "Robinson SC";
    f.expected_probe = ProbeVerdict::Bounded;
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "vc-basic";
    f.description = "identity map into one vanishing-constraint block";
    f.instance = make_instance(SmoothMap::from_expressions(2, {"x1", "x2"}),
                               prototype_set(Prototype::VC, 1), qvec({0, 0}),
                               SmoothMap::from_expressions(2, {"x2"}));
    f.expected = {{"gmfcq", H}, {"mscq", H}};
    f.probe.feasible_distance_override =
        detail::set_distance_override(*f.instance.gamma);
    f.expected_ladder = "Robinson SC";
    f.expected_probe = ProbeVerdict::Bounded;
    out.push_back(std::move(f));
  }
  {
    Fixture f;
    f.name = "sc-basic";
    f.description = "identity map into one switching block";
    f.instance = make_instance(SmoothMap::from_expressions(2, {"x1", "x2"}),
                               prototype_set(Prototype::SC, 1), qvec({0, 0}),
                               SmoothMap::from_expressions(2, {"x1 - x2"}));
    f.expected = {{"gmfcq", H}, {"mscq", H}};
    f.probe.feasible_distance_override =
        detail::set_distance_override(*f.instance.gamma);
    f.expected_ladder = "Robinson SC";
    f.expected_probe = ProbeVerdict::Bounded;
    out.push_back(std::move(f));
  }
  return out;
}

inline const Fixture& builtin_fixture(const std::string& name) {
  static const std::vector<Fixture> all = builtin_fixtures();
  for (const auto& f : all)
    if (f.name == name) return f;
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace cqlab

#endif
