#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dlrkit/glp.hpp"
#include "dlrkit/text.hpp"

namespace py = pybind11;
using namespace dlrkit;

namespace {

// Every entry point works on the toolkit's text formats; rationals cross the
// boundary as "num/den" strings so no floating point is ever involved.

struct Session {
  VarPool pool;
  CnfFormula formula;
};

Session parse(const std::string& text) {
  Session s;
  s.formula = parse_formula(text, s.pool);
  return s;
}

py::dict point_dict(const Point& x, const VarPool& pool) {
  py::dict out;
  for (const auto& [v, r] : x.values) out[py::str(pool.name(v))] = r.str();
  return out;
}

Point point_from_dict(const py::dict& values, VarPool& pool) {
  Point out;
  for (const auto& item : values) {
    std::string name = py::cast<std::string>(item.first);
    std::string value = py::cast<std::string>(py::str(item.second));
    out.set(pool.var(name), parse_rational_text(value));
  }
  return out;
}

py::object piece_tuple(const Piece& p) {
  return py::make_tuple(p.lo ? py::object(py::str(p.lo->str())) : py::none(), p.lo_closed,
                        p.hi ? py::object(py::str(p.hi->str())) : py::none(), p.hi_closed);
}

py::list piece_list(const std::vector<Piece>& pieces) {
  py::list out;
  for (const Piece& p : pieces) out.append(piece_tuple(p));
  return out;
}

HornDlrFormula to_horn(const Session& s) {
  auto direct = recognize_horn_dlr(s.formula);
  if (auto* horn = std::get_if<HornDlrFormula>(&direct)) return *horn;
  StandardDefinition sd = standard_definition(s.formula);
  auto normalized = recognize_horn_dlr(sd.cnf);
  if (auto* horn = std::get_if<HornDlrFormula>(&normalized)) return *horn;
  throw Error("not a Horn-DLR formula (clause " +
              std::to_string(std::get<HornRejection>(normalized).clause_index) + ": " +
              std::get<HornRejection>(normalized).reason + ")");
}

}  // namespace

PYBIND11_MODULE(_dlrkit, m) {
  m.doc() = "Exact solver for semi-linear constraint satisfaction, optimization and convexity";

  py::register_exception<SizeLimitError>(m, "SizeLimitError");
  py::register_exception<SyntaxError>(m, "FormulaSyntaxError");

  m.def(
      "solve",
      [](const std::string& text) -> py::object {
        Session s = parse(text);
        SatResult res = horn_dlr_sat(to_horn(s));
        if (!res) return py::none();
        return point_dict(*res, s.pool);
      },
      py::arg("formula"),
      "Horn-DLR satisfiability; returns a witness dict or None when unsatisfiable.");

  m.def(
      "exhaustive_solve",
      [](const std::string& text) -> py::object {
        Session s = parse(text);
        SatResult res = exhaustive_sat(s.formula);
        if (!res) return py::none();
        return point_dict(*res, s.pool);
      },
      py::arg("formula"), "Brute-force satisfiability for arbitrary normalized formulas.");

  m.def(
      "optimize",
      [](const std::string& text, const std::string& objective,
         const py::object& threshold) -> py::dict {
        Session s = parse(text);
        GlpProblem problem{to_horn(s), parse_term(objective, s.pool), std::nullopt};
        if (!threshold.is_none())
          problem.threshold = parse_rational_text(py::cast<std::string>(py::str(threshold)));
        GlpResult res = glp_solve(problem);
        py::dict out;
        if (std::holds_alternative<GlpInfeasible>(res)) {
          out["kind"] = "infeasible";
        } else if (std::holds_alternative<GlpUnbounded>(res)) {
          out["kind"] = "unbounded";
        } else if (const auto* opt = std::get_if<GlpOptimum>(&res)) {
          out["kind"] = "optimum";
          out["value"] = opt->value.str();
          out["witness"] = point_dict(opt->witness, s.pool);
        } else {
          const auto& sup = std::get<GlpSupremum>(res);
          out["kind"] = "supremum";
          out["value"] = sup.value.str();
          out["probe"] = point_dict(sup.probe, s.pool);
          out["probe_gap"] = sup.probe_gap.str();
        }
        if (problem.threshold) out["decision"] = glp_decide(problem);
        return out;
      },
      py::arg("formula"), py::arg("objective"), py::arg("threshold") = py::none(),
      "Maximize a linear objective over a Horn-DLR solution set.");

  m.def(
      "standardize",
      [](const std::string& text) {
        Session s = parse(text);
        return print_formula(standard_definition(s.formula).cnf, s.pool);
      },
      py::arg("formula"), "Minimal equivalent CNF over the <=0 / !=0 literal alphabet.");

  m.def(
      "recognize_horn",
      [](const std::string& text) -> py::object {
        Session s = parse(text);
        auto res = recognize_horn_dlr(s.formula);
        if (std::holds_alternative<HornDlrFormula>(res)) return py::none();
        const auto& reject = std::get<HornRejection>(res);
        return py::make_tuple(reject.clause_index, reject.reason);
      },
      py::arg("formula"),
      "None when the formula is Horn-DLR, else (clause_index, reason).");

  m.def(
      "eliminate",
      [](const std::string& text, const std::vector<std::string>& variables) {
        Session s = parse(text);
        QuantifiedFormula qf;
        for (const std::string& name : variables) qf.prefix.push_back(s.pool.var(name));
        qf.matrix = s.formula;
        return print_dnf(eliminate_exists(qf), s.pool);
      },
      py::arg("formula"), py::arg("variables"),
      "Existential quantifier elimination; returns the projection as DNF text.");

  m.def(
      "equivalent",
      [](const std::string& f, const std::string& g) -> py::object {
        VarPool pool;
        CnfFormula a = parse_formula(f, pool);
        CnfFormula b = parse_formula(g, pool);
        Equivalence res = equivalent(Formula{a}, Formula{b});
        if (res.equal) return py::none();
        return point_dict(*res.counterexample, pool);
      },
      py::arg("f"), py::arg("g"),
      "None when equal; otherwise a counterexample point where they differ.");

  m.def(
      "decompose",
      [](const std::string& text) {
        Session s = parse(text);
        return piece_list(decompose_unary(Formula{s.formula}).pieces);
      },
      py::arg("formula"),
      "Pieces (lo, lo_closed, hi, hi_closed) of a one-variable formula.");

  m.def(
      "segment_profile",
      [](const std::string& text, const py::dict& p, const py::dict& q) {
        Session s = parse(text);
        SegmentProfile profile = segment_profile(
            Formula{s.formula}, point_from_dict(p, s.pool), point_from_dict(q, s.pool));
        py::dict out;
        out["inside"] = piece_list(profile.inside);
        out["outside"] = piece_list(profile.outside);
        return out;
      },
      py::arg("formula"), py::arg("p"), py::arg("q"),
      "Exact inside/outside split of the segment parameter interval [0,1].");

  m.def(
      "check_convex_union",
      [](const std::string& text) -> py::object {
        Session s = parse(text);
        ConvexUnionResult res = is_convex_union(closure_dnf(to_dnf(s.formula)));
        if (res.convex) return py::none();
        return point_dict(*res.counterexample, s.pool);
      },
      py::arg("formula"),
      "None when the closed union is convex, else a counterexample point.");

  m.def(
      "check_essentially_convex",
      [](const std::string& text, unsigned seed) {
        Session s = parse(text);
        ConvexityVerdict verdict = essential_convexity_check(s.formula, Limits{}, seed);
        py::dict out;
        if (const auto* ec = std::get_if<EssentiallyConvex>(&verdict)) {
          out["kind"] = "essentially-convex";
          out["certificate"] = print_formula(ec->certificate.cnf, s.pool);
        } else if (const auto* nec = std::get_if<NotEssentiallyConvex>(&verdict)) {
          out["kind"] = "not-essentially-convex";
          out["p"] = point_dict(nec->p, s.pool);
          out["q"] = point_dict(nec->q, s.pool);
          out["excluded"] = piece_tuple(nec->excluded);
        } else {
          out["kind"] = "unknown";
          out["report"] = std::get<ConvexityUnknown>(verdict).report;
        }
        return out;
      },
      py::arg("formula"), py::arg("seed") = 0u,
      "Essential-convexity verdict with a certificate or witness pair.");

  m.def(
      "compile_equation",
      [](const std::string& equation) {
        std::size_t eq = equation.find('=');
        if (eq == std::string::npos) throw Error("equation must contain '='");
        VarPool pool;
        LinearTerm lhs = parse_term(equation.substr(0, eq), pool);
        Rational rhs = parse_rational_text(
            equation.substr(equation.find_first_not_of(' ', eq + 1)));
        return print_pp(compile_linear_equation(lhs.coefficients(), rhs - lhs.constant(), pool),
                        pool);
      },
      py::arg("equation"),
      "Compile 'term = rational' into addition/unit atoms; returns instance text.");

  m.def(
      "reduce_one_in_three",
      [](const std::string& phi_text, const std::string& relation_text) {
        VarPool pool;
        OneInThreeInstance phi = parse_one_in_three(phi_text);
        CnfFormula u = parse_formula(relation_text, pool);
        ExclusionParams params = excluded_interval_params(Formula{u});
        return print_csp(reduce_one_in_three(phi, Formula{u}, params, pool), pool);
      },
      py::arg("phi"), py::arg("relation"),
      "Hardness gadget: positive 1-in-3 instance to a CSP over the base signature.");

  m.def(
      "csp_satisfiable",
      [](const std::string& text) {
        VarPool pool;
        return csp_satisfiable(parse_csp(text, pool)).has_value();
      },
      py::arg("instance"), "Brute-force satisfiability of an instance in text form.");

  m.def(
      "oracle_one_in_three",
      [](const std::string& phi_text) -> py::object {
        auto res = brute_force_one_in_three(parse_one_in_three(phi_text));
        if (!res) return py::none();
        py::dict out;
        for (const auto& [name, value] : *res) out[py::str(name)] = value;
        return out;
      },
      py::arg("phi"), "Exhaustive 1-in-3 assignment or None.");

  m.attr("__version__") = "0.1.0";
}
