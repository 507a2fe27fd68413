#include "dlrkit/glp.hpp"

#include <algorithm>

namespace dlrkit {

std::optional<HornDlrFormula> star_preprocess(const HornDlrFormula& f) {
  std::vector<LinearTerm> distinct;
  for (const Clause& clause : f.cnf.clauses)
    for (const Literal& lit : clause.literals)
      if (lit.rel == Rel::NeqZero &&
          std::find(distinct.begin(), distinct.end(), lit.term) == distinct.end())
        distinct.push_back(lit.term);

  std::vector<LinearTerm> doomed;
  for (const LinearTerm& term : distinct) {
    HornDlrFormula extended = f;
    extended.cnf.clauses.push_back(Clause{{neq_zero(term)}});
    if (!horn_dlr_sat(extended)) doomed.push_back(term);
  }
  if (doomed.empty()) return f;

  HornDlrFormula out;
  for (const Clause& clause : f.cnf.clauses) {
    Clause kept;
    for (const Literal& lit : clause.literals) {
      if (lit.rel == Rel::NeqZero &&
          std::find(doomed.begin(), doomed.end(), lit.term) != doomed.end())
        continue;
      kept.literals.push_back(lit);
    }
    if (kept.literals.empty()) return std::nullopt;
    out.cnf.clauses.push_back(std::move(kept));
  }
  return out;
}

namespace {

HornDlrFormula with_objective_at_least(const HornDlrFormula& f, const LinearTerm& objective,
                                       const Rational& bound) {
  HornDlrFormula out = f;
  out.cnf.clauses.push_back(Clause{{leq_zero(LinearTerm(bound) - objective)}});
  return out;
}

}  // namespace

GlpResult glp_solve(const GlpProblem& p) {
  if (!horn_dlr_sat(p.formula)) return GlpInfeasible{};

  std::optional<HornDlrFormula> starred = star_preprocess(p.formula);
  if (!starred) throw InternalError("satisfiable formula emptied by preprocessing");

  Polyhedron disequality_free;
  HornDlrFormula rest;
  for (const Clause& clause : starred->cnf.clauses) {
    bool has_neq = false;
    for (const Literal& lit : clause.literals) has_neq = has_neq || lit.rel == Rel::NeqZero;
    if (has_neq) {
      rest.cnf.clauses.push_back(clause);
    } else {
      // Horn shape makes a disequality-free clause a single weak literal.
      if (clause.literals.size() != 1 || clause.literals[0].rel != Rel::LeqZero)
        throw InternalError("disequality-free clause is not a unit weak literal");
      disequality_free.weak.push_back(clause.literals[0].term);
    }
  }

  LpOutcome step1 = lp_optimize(p.objective, disequality_free);
  if (std::holds_alternative<LpUnbounded>(step1)) return GlpUnbounded{};
  if (std::holds_alternative<LpInfeasible>(step1))
    throw InternalError("satisfiable formula with infeasible weak part");
  const Rational bound = std::get<LpOptimum>(step1).value;

  HornDlrFormula at_bound = with_objective_at_least(*starred, p.objective, bound);
  at_bound.cnf.clauses.push_back(Clause{{leq_zero(p.objective - LinearTerm(bound))}});
  if (SatResult attained = horn_dlr_sat(at_bound)) {
    Point witness = complete_point(*attained, free_vars(p.formula.cnf));
    if (eval_term(p.objective, witness) != bound || !eval_formula(p.formula.cnf, witness))
      throw InternalError("optimum witness failed re-verification");
    return GlpOptimum{bound, witness};
  }

  const Rational gap(1, 100);
  SatResult probe = horn_dlr_sat(with_objective_at_least(*starred, p.objective, bound - gap));
  if (!probe) throw InternalError("supremum probe unexpectedly unsatisfiable");
  Point probe_point = complete_point(*probe, free_vars(p.formula.cnf));
  if (eval_term(p.objective, probe_point) < bound - gap ||
      !eval_formula(p.formula.cnf, probe_point))
    throw InternalError("supremum probe failed re-verification");
  return GlpSupremum{bound, probe_point, gap};
}

bool glp_decide(const GlpProblem& p) {
  if (!p.threshold) throw InvalidParamsError("glp_decide requires a threshold");
  const Rational& m = *p.threshold;
  GlpResult res = glp_solve(p);
  if (std::holds_alternative<GlpInfeasible>(res)) return false;
  if (std::holds_alternative<GlpUnbounded>(res)) return true;
  if (const auto* opt = std::get_if<GlpOptimum>(&res)) return m <= opt->value;
  return m < std::get<GlpSupremum>(res).value;
}

}  // namespace dlrkit
