#ifndef CQLAB_PROBLEM_HPP
#define CQLAB_PROBLEM_HPP

#include <functional>
#include <map>
#include <sstream>

#include "cqlab/disjunctive.hpp"
#include "cqlab/multiindex.hpp"
#include "cqlab/smoothmap.hpp"

namespace cqlab {

struct AnalyticGammaError : std::runtime_error {
  AnalyticGammaError()
      : std::runtime_error(
            "operation needs a polyhedral set; this instance carries an "
            "analytic membership oracle only") {}
};

struct InfeasiblePointError : std::runtime_error {
  InfeasiblePointError()
      : std::runtime_error("F(xbar) is not a member of the constraint set") {}
};

/// Non-polyhedral set given by closed-form membership and distance oracles;
/// usable only by the sampling machinery.
struct AnalyticSet {
  std::string name;
  std::function<bool(const std::vector<double>&)> member;
  std::function<double(const std::vector<double>&)> distance;
};

namespace detail {

/// min over a 1-D parametrized curve t -> (t, f(t)) of the distance to y,
/// by coarse scan plus ternary refinement
inline double curve_distance(const std::vector<double>& y,
                             const std::function<double(double)>& f) {
  auto d2 = [&](double t) {
    double dx = t - y[0], dy = f(t) - y[1];
    return dx * dx + dy * dy;
  };
  double span = 2.0 * (1.0 + std::abs(y[0]) + std::abs(y[1]));
  double best_t = 0, best = d2(0);
  for (int i = -400; i <= 400; ++i) {
    double t = span * i / 400.0;
    double v = d2(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double lo = best_t - span / 400.0, hi = best_t + span / 400.0;
  for (int it = 0; it < 200; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (d2(m1) < d2(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::sqrt(d2((lo + hi) / 2));
}

}  // namespace detail

/// built-in analytic sets used by the sampling fixtures
inline const std::map<std::string, AnalyticSet>& analytic_registry() {
  static const std::map<std::string, AnalyticSet> reg = [] {
    std::map<std::string, AnalyticSet> r;
    r["power32_epigraph"] = {  // {y : y2 >= |y1|^(3/2)}
        "power32_epigraph",
        [](const std::vector<double>& y) {
          return y[1] >= std::pow(std::abs(y[0]), 1.5);
        },
        [](const std::vector<double>& y) {
          if (y[1] >= std::pow(std::abs(y[0]), 1.5)) return 0.0;
          return detail::curve_distance(
              y, [](double t) { return std::pow(std::abs(t), 1.5); });
        }};
    r["parabola_hypograph"] = {  // {y : y2 <= y1^2}
        "parabola_hypograph",
        [](const std::vector<double>& y) { return y[1] <= y[0] * y[0]; },
        [](const std::vector<double>& y) {
          if (y[1] <= y[0] * y[0]) return 0.0;
          return detail::curve_distance(y, [](double t) { return t * t; });
        }};
    return r;
  }();
  return reg;
}

// ---------------------------------------------------------------------------

/// min f(x) s.t. F(x) in Gamma, studied at the feasible point xbar
struct GmpInstance {
  SmoothMap F;
  std::optional<DisjunctiveSet> gamma;        // exact path
  std::optional<AnalyticSet> analytic_gamma;  // sampling-only path
  std::optional<SmoothMap> objective;         // scalar map (d = 1)
  QVec xbar;

  const DisjunctiveSet& disjunctive() const {
    if (!gamma) throw AnalyticGammaError();
    return *gamma;
  }
};

inline GmpInstance make_instance(SmoothMap f, DisjunctiveSet g, QVec xbar,
                                 std::optional<SmoothMap> objective = {}) {
  GmpInstance inst{std::move(f), std::move(g), {}, std::move(objective),
                   std::move(xbar)};
  if (!set_contains(*inst.gamma, inst.F.eval(inst.xbar)))
    throw InfeasiblePointError();
  return inst;
}

inline GmpInstance make_analytic_instance(SmoothMap f, AnalyticSet g, QVec xbar,
                                          std::optional<SmoothMap> objective = {}) {
  GmpInstance inst{std::move(f), {}, std::move(g), std::move(objective),
                   std::move(xbar)};
  std::vector<double> xd;
  for (const auto& c : inst.xbar) xd.push_back(to_double(c));
  if (!inst.analytic_gamma->member(inst.F.eval_d(xd)))
    throw InfeasiblePointError();
  return inst;
}

// ---------------------------------------------------------------------------
// prototype constraint sets

enum class Prototype { CC, VC, rCC, rPC, SC, NLP };

inline DisjunctiveSet prototype_set(Prototype kind, std::size_t copies,
                                    std::size_t nlp_eq = 0, std::size_t nlp_dim = 0) {
  auto ge0 = Interval{Rational(0), std::nullopt};
  auto le0 = Interval{std::nullopt, Rational(0)};
  auto zero = Interval{Rational(0), Rational(0)};
  auto unit = Interval{Rational(0), Rational(1)};
  auto free_iv = Interval{std::nullopt, std::nullopt};
  DisjunctiveSet one;
  switch (kind) {
    case Prototype::CC:
      one = ortho_set(2, {{ge0, zero}, {zero, ge0}});
      break;
    case Prototype::VC:
      one = ortho_set(2, {{le0, ge0}, {ge0, zero}});
      break;
    case Prototype::rCC:
      one = ortho_set(2, {{free_iv, zero}, {zero, unit}});
      break;
    case Prototype::rPC:
      one = ortho_set(2, {{le0, unit}, {ge0, zero}});
      break;
    case Prototype::SC:
      one = ortho_set(2, {{free_iv, zero}, {zero, free_iv}});
      break;
    case Prototype::NLP: {
      std::vector<Interval> box;
      for (std::size_t i = 0; i < nlp_eq; ++i) box.push_back(zero);
      for (std::size_t i = nlp_eq; i < nlp_dim; ++i) box.push_back(le0);
      DisjunctiveSet s = ortho_set(nlp_dim, {box});
      s.blocks.assign(nlp_dim, {1, true});
      return s;
    }
  }
  one.blocks = {{2, true}};
  DisjunctiveSet s = one;
  for (std::size_t c = 1; c < copies; ++c) s = product_set(s, one);
  return s;
}

// ---------------------------------------------------------------------------
// structurally guaranteed multi-indices

/// The finest factorizations for which the blockwise-vanishing property is
/// structurally guaranteed: the whole range always; the recorded product
/// blocks; all-singleton blocks for ortho sets. Coarsenings of any returned
/// index are admissible too (see is_admissible).
inline std::vector<MultiIndex> admissible_multi_indices(const DisjunctiveSet& s) {
  std::vector<MultiIndex> out;
  auto push = [&](MultiIndex m) {
    for (const auto& e : out)
      if (e == m) return;
    out.push_back(std::move(m));
  };
  push(delta_p(s.dim));
  auto blocks = s.block_structure();
  if (blocks.size() > 1) push(MultiIndex{s.block_sizes()});
  // finest: ortho factors split into singletons
  MultiIndex finest;
  for (const auto& b : blocks) {
    if (b.ortho)
      finest.parts.insert(finest.parts.end(), b.size, 1);
    else
      finest.parts.push_back(b.size);
  }
  push(std::move(finest));
  if (s.ortho_flag) push(delta_q(s.dim));
  return out;
}

inline bool is_admissible(const DisjunctiveSet& s, const MultiIndex& delta) {
  if (delta.total() != s.dim) return false;
  for (const auto& fine : admissible_multi_indices(s))
    if (refine(fine, delta)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// problem file format (INI-style sections, '#' comments, rationals as p/q)

struct ProblemParseError : std::runtime_error {
  explicit ProblemParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

namespace detail {

inline QVec parse_rational_list(const std::string& s, std::size_t line) {
  QVec v;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    auto r = rat_parse(tok);
    if (!r) throw ProblemParseError("bad rational '" + tok + "'", line);
    v.push_back(*r);
  }
  return v;
}

/// "a1 a2 ... ak <= b" or "a1 ... ak = b"
inline void parse_row(const std::string& s, std::size_t dim, std::size_t line,
                      HPoly& piece) {
  std::string rel;
  std::size_t pos;
  bool eq = false;
  if ((pos = s.find("<=")) != std::string::npos) {
    rel = "<=";
  } else if ((pos = s.find('=')) != std::string::npos) {
    rel = "=";
    eq = true;
  } else {
    throw ProblemParseError("row needs '<=' or '='", line);
  }
  QVec lhs = parse_rational_list(s.substr(0, pos), line);
  QVec rhs = parse_rational_list(s.substr(pos + rel.size()), line);
  if (lhs.size() != dim || rhs.size() != 1)
    throw ProblemParseError("row arity mismatch", line);
  if (eq) {
    piece.eq.push_back(lhs);
    piece.eq_rhs.push_back(rhs[0]);
  } else {
    piece.ineq.push_back(lhs);
    piece.ineq_rhs.push_back(rhs[0]);
  }
}

}  // namespace detail

/// Parses the declarative problem format:
///   [problem] n = ..., d = ...
///   [map]     F1 = expr, ..., Fd = expr
///   [gamma]   prototype = CC|VC|rCC|rPC|SC|NLP (+ copies / equalities), or
///             piece = rows separated by ';' (repeatable), or
///             analytic = registry name
///   [point]   x = rational coordinates
///   [objective] f = expr (optional)
inline GmpInstance parse_problem(const std::string& text) {
  std::istringstream in(text);
  std::string raw, section;
  std::size_t lineno = 0, n = 0, d = 0;
  std::map<std::size_t, std::string> fexprs;
  std::string gamma_proto, gamma_analytic, objective_src;
  std::size_t gamma_copies = 1, gamma_eqs = 0;
  std::vector<std::vector<std::string>> gamma_pieces;  // rows per piece
  std::vector<std::pair<std::string, std::size_t>> point_src;
  std::optional<std::string> point_line;
  std::size_t point_lineno = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line.front() == '[') {
      if (line.back() != ']') throw ProblemParseError("bad section header", lineno);
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto eqpos = line.find('=');
    if (eqpos == std::string::npos)
      throw ProblemParseError("expected key = value", lineno);
    std::string key = line.substr(0, eqpos);
    std::string val = line.substr(eqpos + 1);
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    key = trim(key);
    val = trim(val);
    if (section == "problem") {
      if (key == "n")
        n = std::stoul(val);
      else if (key == "d")
        d = std::stoul(val);
      else
        throw ProblemParseError("unknown key '" + key + "'", lineno);
    } else if (section == "map") {
      if (key.size() < 2 || key[0] != 'F')
        throw ProblemParseError("map keys are F1..Fd", lineno);
      fexprs[std::stoul(key.substr(1))] = val;
    } else if (section == "gamma") {
      if (key == "prototype")
        gamma_proto = val;
      else if (key == "copies")
        gamma_copies = std::stoul(val);
      else if (key == "equalities")
        gamma_eqs = std::stoul(val);
      else if (key == "analytic")
        gamma_analytic = val;
      else if (key == "piece") {
        std::vector<std::string> rows;
        std::istringstream rs(val);
        std::string row;
        while (std::getline(rs, row, ';')) rows.push_back(row);
        gamma_pieces.push_back(std::move(rows));
      } else {
        throw ProblemParseError("unknown key '" + key + "'", lineno);
      }
    } else if (section == "point") {
      if (key != "x") throw ProblemParseError("point key is x", lineno);
      point_line = val;
      point_lineno = lineno;
    } else if (section == "objective") {
      if (key != "f") throw ProblemParseError("objective key is f", lineno);
      objective_src = val;
    } else {
      throw ProblemParseError("unknown section '" + section + "'", lineno);
    }
  }
  (void)point_src;
  if (n == 0 || d == 0) throw ProblemParseError("missing [problem] n/d", 0);
  std::vector<std::string> comps;
  for (std::size_t i = 1; i <= d; ++i) {
    auto it = fexprs.find(i);
    if (it == fexprs.end())
      throw ProblemParseError("missing map component F" + std::to_string(i), 0);
    comps.push_back(it->second);
  }
  SmoothMap F = SmoothMap::from_expressions(n, comps);
  if (!point_line) throw ProblemParseError("missing [point] x", 0);
  QVec xbar = detail::parse_rational_list(*point_line, point_lineno);
  if (xbar.size() != n) throw ProblemParseError("point arity mismatch", point_lineno);
  std::optional<SmoothMap> obj;
  if (!objective_src.empty())
    obj = SmoothMap::from_expressions(n, {objective_src});

  if (!gamma_analytic.empty()) {
    auto it = analytic_registry().find(gamma_analytic);
    if (it == analytic_registry().end())
      throw ProblemParseError("unknown analytic set '" + gamma_analytic + "'", 0);
    return make_analytic_instance(std::move(F), it->second, std::move(xbar),
                                  std::move(obj));
  }
  DisjunctiveSet g;
  if (!gamma_proto.empty()) {
    Prototype k;
    if (gamma_proto == "CC")
      k = Prototype::CC;
    else if (gamma_proto == "VC")
      k = Prototype::VC;
    else if (gamma_proto == "rCC")
      k = Prototype::rCC;
    else if (gamma_proto == "rPC")
      k = Prototype::rPC;
    else if (gamma_proto == "SC")
      k = Prototype::SC;
    else if (gamma_proto == "NLP")
      k = Prototype::NLP;
    else
      throw ProblemParseError("unknown prototype '" + gamma_proto + "'", 0);
    g = prototype_set(k, gamma_copies, gamma_eqs, d);
  } else if (!gamma_pieces.empty()) {
    g.dim = d;
    for (const auto& rows : gamma_pieces) {
      HPoly p;
      p.dim = d;
      for (const auto& r : rows) detail::parse_row(r, d, 0, p);
      g.pieces.push_back(std::move(p));
    }
  } else {
    throw ProblemParseError("missing [gamma] description", 0);
  }
  if (g.dim != d) throw ProblemParseError("gamma dimension mismatch", 0);
  return make_instance(std::move(F), std::move(g), std::move(xbar), std::move(obj));
}

}  // namespace cqlab

#endif
