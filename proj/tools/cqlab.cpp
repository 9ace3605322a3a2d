#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "cqlab/report.hpp"

using namespace cqlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;

GmpInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::optional<MultiIndex> parse_delta(const std::string& s) {
  if (s.empty()) return std::nullopt;
  MultiIndex m;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) m.parts.push_back(std::stoul(tok));
  return m;
}

void print_vcone(const VCone& v, std::ostream& out) {
  auto vec = [&](const QVec& x) {
    QVec p = primitive(x);
    out << "(";
    for (std::size_t i = 0; i < p.size(); ++i)
      out << (i ? "," : "") << rat_str(p[i]);
    out << ")";
  };
  out << "{rays:";
  for (const auto& r : v.rays) {
    out << " ";
    vec(r);
  }
  out << "; lineality:";
  for (const auto& l : v.lineality) {
    out << " ";
    vec(l);
  }
  out << "}";
}

void print_union(const PolyConeUnion& u, std::ostream& out) {
  if (u.pieces.empty()) {
    out << "empty\n";
    return;
  }
  for (const auto& [h, v] : u.pieces) {
    out << "    ";
    print_vcone(v, out);
    out << "\n";
  }
}

int cmd_analyze(const std::string& file, std::string checks, std::string delta_s,
                bool directional, std::uint64_t seed, int budget,
                const std::string& format) {
  GmpInstance inst = load_problem(file);
  ProbeConfig cfg;
  cfg.seed = seed;
  if (budget > 0) cfg.samples_per_radius = budget;
  std::optional<MultiIndex> delta = parse_delta(delta_s);

  CheckReport rep;
  rep.seed = seed;
  if (checks.empty() || checks == "all") {
    rep = check_all(inst, cfg);
  } else {
    std::istringstream in(checks);
    std::string name;
    while (std::getline(in, name, ',')) {
      if (name == "gmfcq") {
        rep.verdicts["gmfcq"] = check_gmfcq(inst);
      } else if (name == "foscms") {
        rep.verdicts["foscms"] = check_foscms(inst);
      } else if (name == "soscms") {
        rep.verdicts["soscms"] = check_soscms(inst, seed);
      } else if (name == "pn" || name == "pn_dir") {
        rep.verdicts[name] =
            check_pseudo_normality(inst, directional || name == "pn_dir", cfg);
      } else if (name == "qn" || name == "pqn" || name == "soscqn") {
        MultiIndex d = delta ? *delta : delta_q(inst.disjunctive().dim);
        try {
          rep.verdicts["qn"] = check_pq_normality(inst, d, directional, cfg);
        } catch (const AssumptionNotGuaranteedError& e) {
          // an explicitly requested multi-index must be admissible; for the
          // default one we only report that the gate failed
          if (delta) throw;
          rep.qn_gate_ok = false;
          Verdict v;
          v.status = Status::UNDECIDED;
          v.notes.push_back(e.what());
          rep.verdicts["qn"] = std::move(v);
        }
      } else if (name == "probe") {
        rep.probe = mscq_probe(inst, cfg);
      } else {
        std::cerr << "unknown check '" << name << "'\n";
        return kExitInput;
      }
    }
  }
  if (format == "json")
    std::cout << report_json(inst, rep).dump(2) << "\n";
  else
    std::cout << report_text(inst, rep);
  return kExitOk;
}

int cmd_cones(const std::string& file, const std::string& dir_s) {
  GmpInstance inst = load_problem(file);
  const DisjunctiveSet& g = inst.disjunctive();
  QVec y = inst.F.eval(inst.xbar);
  std::cout << "  tangent cone:\n";
  print_union(tangent_cone(g, y), std::cout);
  std::cout << "  regular normal cone:\n";
  auto reg = regular_normal_cone(g, y);
  std::cout << "    ";
  print_vcone(reg.second, std::cout);
  std::cout << "\n  limiting normal cone:\n";
  print_union(limiting_normal_cone(g, y), std::cout);
  if (!dir_s.empty()) {
    QVec d;
    std::istringstream in(dir_s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      auto r = rat_parse(tok);
      if (!r) throw std::runtime_error("bad direction component '" + tok + "'");
      d.push_back(*r);
    }
    std::cout << "  directional limiting normal cone:\n";
    print_union(directional_limiting_normal_cone(g, y, d), std::cout);
  }
  return kExitOk;
}

int cmd_table4(const std::vector<std::string>& cell_args, std::uint64_t seed) {
  TableSpec spec = default_table_spec();
  if (!cell_args.empty() &&
      !(cell_args.size() == 1 && cell_args[0] == "all")) {
    TableSpec filtered;
    for (const auto& arg : cell_args) {
      std::vector<long> v;
      std::istringstream in(arg);
      std::string tok;
      while (std::getline(in, tok, ',')) v.push_back(std::stol(tok));
      if (v.size() != 4) throw std::runtime_error("cells are a,b,c,d");
      bool known = false;
      for (const auto& c : spec.cells)
        if (c.a == v[0] && c.b == v[1] && c.c == v[2] && c.d == v[3]) {
          filtered.cells.push_back(c);
          known = true;
        }
      if (!known)
        filtered.cells.push_back({v[0], v[1], v[2], v[3], std::string()});
    }
    spec = std::move(filtered);
  }
  auto rows = run_table(spec, seed);
  int mismatches = 0;
  for (const auto& r : rows) {
    std::cout << "  (a,b,c,d)=(" << r.cell.a << "," << r.cell.b << ","
              << r.cell.c << "," << r.cell.d << ")  ->  " << r.outcome.label;
    if (!r.cell.expected.empty()) {
      std::cout << (r.match ? "  [match]" : "  [MISMATCH, expected " +
                                                r.cell.expected + "]");
      if (!r.match) ++mismatches;
    }
    std::cout << "\n";
  }
  std::cout << (mismatches ? "mismatches: " + std::to_string(mismatches)
                           : "all labeled cells match")
            << "\n";
  return kExitOk;
}

int cmd_fixtures(const std::string& action, const std::string& name) {
  auto all = builtin_fixtures();
  if (action == "list") {
    for (const auto& f : all)
      std::cout << "  " << f.name << ": " << f.description << "\n";
    return kExitOk;
  }
  int failures = 0;
  for (const auto& f : all) {
    if (!name.empty() && f.name != name) continue;
    bool ok = true;
    std::vector<std::string> why;
    auto rep = check_all(f.instance, f.probe);
    for (const auto& [check, st] : f.expected) {
      if (rep.verdicts.at(check).status != st) {
        ok = false;
        why.push_back(check + ": got " +
                      status_str(rep.verdicts.at(check).status) + ", expected " +
                      status_str(st));
      }
    }
    if (!f.expected_ladder.empty()) {
      auto lo = certify_mscq_ladder(f.instance, f.probe);
      if (lo.label.rfind(f.expected_ladder, 0) != 0) {
        ok = false;
        why.push_back("ladder: got '" + lo.label + "', expected '" +
                      f.expected_ladder + "'");
      }
    }
    if (f.expected_probe && rep.probe && rep.probe->verdict != *f.expected_probe) {
      ok = false;
      why.push_back("probe verdict mismatch");
    }
    std::cout << "  " << f.name << ": " << (ok ? "pass" : "FAIL") << "\n";
    for (const auto& w : why) std::cout << "      " << w << "\n";
    if (!ok) ++failures;
  }
  return failures ? 1 : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constraint-qualification analysis for disjunctive programs"};
  app.require_subcommand(1);

  std::string file, checks, delta_s, dir_s, format = "text", fx_action = "list",
                                            fx_name;
  std::vector<std::string> cells;
  bool directional = false;
  std::uint64_t seed = 0;
  int budget = 0;

  auto* analyze = app.add_subcommand("analyze", "run checks on a problem file");
  analyze->add_option("file", file)->required();
  analyze->add_option("--checks", checks,
                      "comma list: gmfcq,foscms,soscms,pn,pn_dir,qn,probe");
  analyze->add_option("--delta", delta_s, "block sizes, e.g. 1,1");
  analyze->add_flag("--directional", directional);
  analyze->add_option("--seed", seed);
  analyze->add_option("--budget", budget, "samples per probe radius");
  analyze->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* cones = app.add_subcommand("cones", "print the cones at the point");
  cones->add_option("file", file)->required();
  cones->add_option("--direction", dir_s, "range direction, e.g. 1,1");

  auto* table = app.add_subcommand("table4", "quartic-family decision table");
  table->add_option("--cells", cells, "all (default) or a,b,c,d tuples");
  table->add_option("--seed", seed);

  auto* fixtures = app.add_subcommand("fixtures", "built-in instance suite");
  fixtures->add_option("action", fx_action)->check(CLI::IsMember({"list", "run"}));
  fixtures->add_option("name", fx_name);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze)
      return cmd_analyze(file, checks, delta_s, directional, seed, budget, format);
    if (*cones) return cmd_cones(file, dir_s);
    if (*table) return cmd_table4(cells, seed);
    if (*fixtures) return cmd_fixtures(fx_action, fx_name);
  } catch (const AssumptionNotGuaranteedError& e) {
    std::cerr << "AssumptionNotGuaranteed: " << e.what() << "\n";
    return kExitInput;
  } catch (const AnalyticGammaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
