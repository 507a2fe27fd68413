#include "dlrkit/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dlrkit/glp.hpp"
#include "dlrkit/text.hpp"

namespace dlrkit {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trimmed(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return "";
  std::size_t last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

Limits limits_from(long long budget) {
  Limits limits;
  if (budget > 0) {
    limits.dnf_cells = budget;
    limits.selections = budget;
  } else if (const char* env = std::getenv("DLRKIT_BUDGET")) {
    long long value = std::atoll(env);
    if (value > 0) {
      limits.dnf_cells = value;
      limits.selections = value;
    }
  }
  return limits;
}

// Horn inputs pass through untouched; anything else is normalized first and
// rejected only if still outside the class.
HornDlrFormula require_horn(const CnfFormula& f, const Limits& limits) {
  auto direct = recognize_horn_dlr(f);
  if (auto* horn = std::get_if<HornDlrFormula>(&direct)) return *horn;
  StandardDefinition sd = standard_definition(f, limits);
  auto normalized = recognize_horn_dlr(sd.cnf);
  if (auto* horn = std::get_if<HornDlrFormula>(&normalized)) return *horn;
  const auto& reject = std::get<HornRejection>(normalized);
  throw Error("not a Horn-DLR formula (clause " + std::to_string(reject.clause_index) + ": " +
              reject.reason + ")");
}

std::string point_values(const Point& x, const VarPool& pool) {
  std::string out = "(";
  bool first = true;
  for (const auto& [v, r] : x.values) {
    if (!first) out += ",";
    first = false;
    out += pool.name(v) + "=" + r.str();
  }
  return out + ")";
}

std::string piece_range(const Piece& p) {
  std::string out = p.lo_closed ? "[" : "(";
  out += p.lo ? p.lo->str() : "-inf";
  out += ",";
  out += p.hi ? p.hi->str() : "+inf";
  out += p.hi_closed ? "]" : ")";
  return out;
}

void emit_pieces(std::ostream& out, const std::string& label, const std::vector<Piece>& pieces,
                 bool csv) {
  if (csv) {
    for (const Piece& p : pieces)
      out << label << "," << (p.lo ? p.lo->str() : "-inf") << "," << (p.lo_closed ? 1 : 0) << ","
          << (p.hi ? p.hi->str() : "+inf") << "," << (p.hi_closed ? 1 : 0) << "\n";
    return;
  }
  out << label;
  for (const Piece& p : pieces) out << " " << piece_range(p);
  out << "\n";
}

struct Options {
  std::string file;
  std::string second_file;
  std::string objective;
  std::string threshold;
  std::string p_text;
  std::string q_text;
  std::string exists;
  std::string equation;
  std::string mode;
  std::string format = "plain";
  std::string box = "10";
  long long budget = 0;
  unsigned seed = 0;
};

int dispatch(const std::string& command, const Options& opt, std::ostream& out) {
  Limits limits = limits_from(opt.budget);
  VarPool pool;

  auto sat_line = [&](const Point& witness) {
    std::string values = print_point(witness, pool);
    return values.empty() ? std::string("SAT") : "SAT " + values;
  };

  if (command == "solve") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    HornDlrFormula horn = require_horn(f, limits);
    if (SatResult res = horn_dlr_sat(horn))
      out << sat_line(*res) << "\n";
    else
      out << "UNSAT\n";
    return 0;
  }

  if (command == "optimize") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    GlpProblem problem{require_horn(f, limits), parse_term(opt.objective, pool), std::nullopt};
    if (!opt.threshold.empty()) problem.threshold = parse_rational_text(opt.threshold);
    GlpResult res = glp_solve(problem);
    if (std::holds_alternative<GlpInfeasible>(res)) {
      out << "INFEASIBLE\n";
    } else if (std::holds_alternative<GlpUnbounded>(res)) {
      out << "UNBOUNDED\n";
    } else if (const auto* optimum = std::get_if<GlpOptimum>(&res)) {
      out << "OPTIMUM " << optimum->value.str() << "\n";
      out << "WITNESS " << print_point(optimum->witness, pool) << "\n";
    } else {
      const auto& sup = std::get<GlpSupremum>(res);
      out << "SUPREMUM " << sup.value.str() << "\n";
      out << "PROBE gap=" << sup.probe_gap.str() << " " << print_point(sup.probe, pool) << "\n";
    }
    if (problem.threshold) out << "DECISION " << (glp_decide(problem) ? "true" : "false") << "\n";
    return 0;
  }

  if (command == "qe") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    QuantifiedFormula qf;
    std::istringstream vars(opt.exists);
    std::string name;
    while (std::getline(vars, name, ','))
      if (!name.empty()) qf.prefix.push_back(pool.var(name));
    qf.matrix = f;
    out << print_dnf(eliminate_exists(qf, limits), pool) << "\n";
    return 0;
  }

  if (command == "standardize") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    out << print_formula(standard_definition(f, limits).cnf, pool) << "\n";
    return 0;
  }

  if (command == "recognize") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    auto res = recognize_horn_dlr(f);
    if (std::holds_alternative<HornDlrFormula>(res)) {
      out << "HORN-DLR\n";
    } else {
      const auto& reject = std::get<HornRejection>(res);
      out << "NOT-HORN-DLR clause=" << reject.clause_index << " " << reject.reason << "\n";
    }
    return 0;
  }

  if (command == "compile-eq") {
    std::size_t eq = opt.equation.find('=');
    if (eq == std::string::npos) throw Error("equation must contain '='");
    LinearTerm lhs = parse_term(opt.equation.substr(0, eq), pool);
    Rational rhs = parse_rational_text(trimmed(opt.equation.substr(eq + 1)));
    out << print_pp(compile_linear_equation(lhs.coefficients(), rhs - lhs.constant(), pool),
                    pool);
    return 0;
  }

  if (command == "lp2csp") {
    std::vector<std::pair<LinearTerm, Rational>> rows;
    std::istringstream in(slurp(opt.file));
    std::string line;
    while (std::getline(in, line)) {
      if (trimmed(line).empty() || line[0] == '#') continue;
      std::size_t sep = line.find("<=");
      if (sep == std::string::npos) throw Error("inequality lines must use '<='");
      rows.emplace_back(parse_term(line.substr(0, sep), pool),
                        parse_rational_text(trimmed(line.substr(sep + 2))));
    }
    out << print_csp(lp_to_csp(rows, pool), pool, limits);
    return 0;
  }

  if (command == "closure") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    std::vector<Polyhedron> closed = closure_dnf(to_dnf(f, limits));
    DnfFormula printable;
    for (const Polyhedron& p : closed) {
      DnfCell cell;
      for (const LinearTerm& t : p.weak) cell.literals.push_back(leq_zero(t));
      printable.cells.push_back(std::move(cell));
    }
    out << print_dnf(printable, pool) << "\n";
    return 0;
  }

  if (command == "check-convex") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    ConvexUnionResult res = is_convex_union(closure_dnf(to_dnf(f, limits)), limits);
    if (res.convex)
      out << "CONVEX\n";
    else
      out << "NOT-CONVEX " << print_point(*res.counterexample, pool) << "\n";
    return 0;
  }

  if (command == "check-essconvex") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    ConvexityVerdict verdict = essential_convexity_check(f, limits, opt.seed);
    if (std::holds_alternative<EssentiallyConvex>(verdict)) {
      out << "ESSENTIALLY-CONVEX\n";
      out << print_formula(std::get<EssentiallyConvex>(verdict).certificate.cnf, pool) << "\n";
    } else if (const auto* witness = std::get_if<NotEssentiallyConvex>(&verdict)) {
      out << "NOT-ESSENTIALLY-CONVEX p=" << point_values(witness->p, pool)
          << " q=" << point_values(witness->q, pool) << " t∈" << piece_range(witness->excluded)
          << "\n";
    } else {
      out << "UNKNOWN " << std::get<ConvexityUnknown>(verdict).report << "\n";
    }
    return 0;
  }

  if (command == "segment-profile") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    Point p = parse_point(opt.p_text, pool);
    Point q = parse_point(opt.q_text, pool);
    SegmentProfile profile = segment_profile(Formula{f}, p, q);
    bool csv = opt.format == "csv";
    if (csv) out << "kind,lo,lo_closed,hi,hi_closed\n";
    emit_pieces(out, csv ? "inside" : "INSIDE", profile.inside, csv);
    emit_pieces(out, csv ? "outside" : "OUTSIDE", profile.outside, csv);
    return 0;
  }

  if (command == "decompose") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    UnaryDecomposition dec = decompose_unary(Formula{f});
    bool csv = opt.format == "csv";
    if (csv) out << "kind,lo,lo_closed,hi,hi_closed\n";
    emit_pieces(out, csv ? "piece" : "PIECES", dec.pieces, csv);
    return 0;
  }

  if (command == "reduce-1in3") {
    OneInThreeInstance phi = parse_one_in_three(slurp(opt.file));
    CnfFormula u = parse_formula(slurp(opt.second_file), pool);
    ExclusionParams params = excluded_interval_params(Formula{u});
    out << print_csp(reduce_one_in_three(phi, Formula{u}, params, pool, limits), pool, limits);
    return 0;
  }

  if (command == "oracle-sat") {
    std::string text = slurp(opt.file);
    std::size_t first = text.find_first_not_of(" \t\r\n");
    bool is_formula = first != std::string::npos && text[first] == '(';
    if (is_formula) {
      CnfFormula f = parse_formula(text, pool);
      if (SatResult res = exhaustive_sat(f, limits))
        out << sat_line(*res) << "\n";
      else
        out << "UNSAT\n";
    } else {
      CspInstance instance = parse_csp(text, pool);
      if (csp_satisfiable(instance, limits))
        out << "SAT\n";
      else
        out << "UNSAT\n";
    }
    return 0;
  }

  if (command == "oracle-1in3") {
    OneInThreeInstance phi = parse_one_in_three(slurp(opt.file));
    if (auto assignment = brute_force_one_in_three(phi)) {
      out << "SAT";
      for (const auto& [name, value] : *assignment) out << " " << name << "=" << (value ? 1 : 0);
      out << "\n";
    } else {
      out << "UNSAT\n";
    }
    return 0;
  }

  if (command == "plot-data") {
    CnfFormula f = parse_formula(slurp(opt.file), pool);
    if (opt.mode == "profile") {
      Point p = parse_point(opt.p_text, pool);
      Point q = parse_point(opt.q_text, pool);
      SegmentProfile profile = segment_profile(Formula{f}, p, q);
      out << "kind,lo,lo_closed,hi,hi_closed\n";
      emit_pieces(out, "inside", profile.inside, true);
      emit_pieces(out, "outside", profile.outside, true);
      return 0;
    }
    if (opt.mode == "cells") {
      std::set<VarId> vars = free_vars(f);
      if (vars.size() != 2) throw Error("plot-data cells requires a two-variable formula");
      VarId vx = *vars.begin(), vy = *std::next(vars.begin());
      Rational box = parse_rational_text(opt.box);
      std::vector<Polyhedron> cells = closure_dnf(to_dnf(f, limits));
      out << "cell,x,y\n";
      for (std::size_t c = 0; c < cells.size(); ++c) {
        Polyhedron clipped = cells[c];
        for (VarId v : {vx, vy}) {
          clipped.weak.push_back(LinearTerm::variable(v).plus_constant(-box));
          clipped.weak.push_back((-LinearTerm::variable(v)).plus_constant(-box));
        }
        std::vector<Point> vertices;
        for (std::size_t i = 0; i < clipped.weak.size(); ++i) {
          for (std::size_t j = i + 1; j < clipped.weak.size(); ++j) {
            Polyhedron vertex = clipped;
            vertex.equalities = {clipped.weak[i], clipped.weak[j]};
            if (std::optional<Point> pt = lp_feasible(vertex)) {
              Point full = complete_point(*pt, vars);
              if (std::find(vertices.begin(), vertices.end(), full) == vertices.end())
                vertices.push_back(full);
            }
          }
        }
        for (const Point& v : vertices)
          out << c << "," << v.at(vx).str() << "," << v.at(vy).str() << "\n";
      }
      return 0;
    }
    throw Error("plot-data mode must be 'profile' or 'cells'");
  }

  throw Error("unknown subcommand: " + command);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact toolkit for semi-linear constraint satisfaction and optimization",
               "dlrkit"};
  app.require_subcommand(1);

  Options opt;
  std::string command;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--budget", opt.budget, "expansion budget (cells/selections)");
    sub->add_option("--seed", opt.seed, "seed for sampled probe points");
    sub->add_option("--format", opt.format, "plain or csv")
        ->check(CLI::IsMember({"plain", "csv"}));
    sub->callback([&command, sub] { command = sub->get_name(); });
  };

  const std::pair<const char*, const char*> file_verbs[] = {
      {"solve", "Horn-DLR satisfiability with a rational witness"},
      {"standardize", "minimal <=0 / !=0 normal form"},
      {"recognize", "check the Horn-DLR clause shapes"},
      {"qe", "eliminate existential variables"},
      {"closure", "weakened nonempty cells of the union"},
      {"check-convex", "is the closed union convex?"},
      {"check-essconvex", "essential-convexity verdict with certificate"},
      {"decompose", "interval decomposition of a one-variable formula"},
      {"oracle-sat", "brute-force satisfiability (formula or instance file)"},
      {"lp2csp", "compile inequalities into base-signature atoms"},
  };
  for (const auto& [name, help] : file_verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("file", opt.file)->required();
    add_common(sub);
    if (std::string(name) == "qe")
      sub->add_option("--exists", opt.exists, "comma-separated variables to eliminate")
          ->required();
  }
  {
    CLI::App* sub = app.add_subcommand("optimize", "maximize an objective over a Horn-DLR set");
    sub->add_option("file", opt.file)->required();
    sub->add_option("--obj", opt.objective, "objective term")->required();
    sub->add_option("--threshold", opt.threshold, "decision threshold");
    add_common(sub);
  }
  {
    CLI::App* sub = app.add_subcommand("compile-eq", "compile a linear equation into atoms");
    sub->add_option("equation", opt.equation, "linear equation 'term = rational'")->required();
    add_common(sub);
  }
  {
    CLI::App* sub = app.add_subcommand("segment-profile", "exact on-segment membership profile");
    sub->add_option("file", opt.file)->required();
    sub->add_option("--p", opt.p_text)->required();
    sub->add_option("--q", opt.q_text)->required();
    add_common(sub);
  }
  {
    CLI::App* sub = app.add_subcommand("reduce-1in3", "one-in-three hardness reduction");
    sub->add_option("phi", opt.file)->required();
    sub->add_option("relation", opt.second_file)->required();
    add_common(sub);
  }
  {
    CLI::App* sub = app.add_subcommand("oracle-1in3", "brute-force one-in-three assignment");
    sub->add_option("phi", opt.file)->required();
    add_common(sub);
  }
  {
    CLI::App* sub = app.add_subcommand("plot-data", "CSV plot data for profiles or 2D cells");
    sub->add_option("mode", opt.mode, "profile or cells")->required();
    sub->add_option("file", opt.file)->required();
    sub->add_option("--p", opt.p_text);
    sub->add_option("--q", opt.q_text);
    sub->add_option("--box", opt.box, "clipping half-width for unbounded cells");
    add_common(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    return dispatch(command, opt, out);
  } catch (const SizeLimitError& e) {
    err << "size-limit: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    err << "internal-error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace dlrkit
