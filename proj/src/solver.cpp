#include "dlrkit/solver.hpp"

#include <algorithm>

namespace dlrkit {

std::variant<HornDlrFormula, HornRejection> recognize_horn_dlr(const CnfFormula& f) {
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    std::size_t weak = 0;
    for (const Literal& lit : f.clauses[i].literals) {
      switch (lit.rel) {
        case Rel::NeqZero:
          break;
        case Rel::LeqZero:
          ++weak;
          break;
        case Rel::LtZero:
          return HornRejection{i, "strict literal in clause"};
        case Rel::EqZero:
          return HornRejection{i, "equality literal in clause"};
      }
    }
    if (weak > 1) return HornRejection{i, "more than one weak-inequality literal"};
  }
  return HornDlrFormula{f};
}

namespace {

// A point of p where the term is provably nonzero; p is closed and nonempty
// and the term is known not to vanish identically on p.
Point nonzero_sample(const Polyhedron& p, const LinearTerm& term) {
  LpOutcome hi = lp_optimize(term, p);
  if (std::holds_alternative<LpOptimum>(hi)) {
    const LpOptimum& opt = std::get<LpOptimum>(hi);
    if (opt.value.sign() > 0) return opt.witness;
  } else if (std::holds_alternative<LpUnbounded>(hi)) {
    Polyhedron above = p;
    above.weak.push_back(LinearTerm(Rational(1)) - term);  // term >= 1
    if (std::optional<Point> pt = lp_feasible(above)) return *pt;
    throw InternalError("unbounded term admits no large value");
  }
  LpOutcome lo = lp_optimize(-term, p);
  if (std::holds_alternative<LpOptimum>(lo)) {
    const LpOptimum& opt = std::get<LpOptimum>(lo);
    if (opt.value.sign() > 0) return opt.witness;
  } else if (std::holds_alternative<LpUnbounded>(lo)) {
    Polyhedron below = p;
    below.weak.push_back(term.plus_constant(Rational(1)));  // term <= -1
    if (std::optional<Point> pt = lp_feasible(below)) return *pt;
    throw InternalError("unbounded term admits no small value");
  }
  throw InternalError("term vanishes on the polyhedron despite being unblocked");
}

}  // namespace

SatResult horn_dlr_sat(const HornDlrFormula& f) {
  std::set<VarId> vars = free_vars(f.cnf);

  std::vector<LinearTerm> units;
  std::vector<Clause> remaining;
  for (const Clause& clause : f.cnf.clauses) {
    if (clause.literals.size() == 1 && clause.literals[0].rel == Rel::LeqZero)
      units.push_back(clause.literals[0].term);
    else
      remaining.push_back(clause);
  }

  Polyhedron forced;
  for (;;) {
    forced.weak = units;
    if (!lp_feasible(forced)) return std::nullopt;

    bool fired = false;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const Clause& clause = remaining[i];
      bool all_blocked = true;
      for (const Literal& lit : clause.literals)
        if (lit.rel == Rel::NeqZero && !entails_zero(forced, lit.term)) {
          all_blocked = false;
          break;
        }
      if (!all_blocked) continue;
      const Literal* weak = nullptr;
      for (const Literal& lit : clause.literals)
        if (lit.rel == Rel::LeqZero) weak = &lit;
      if (!weak) return std::nullopt;  // disequality-only clause fully blocked
      units.push_back(weak->term);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
      fired = true;
      break;
    }
    if (!fired) break;
  }

  // One unblocked disequality per surviving clause; a generic convex
  // combination of per-clause nonzero samples keeps all of them nonzero.
  std::vector<LinearTerm> chosen;
  for (const Clause& clause : remaining) {
    for (const Literal& lit : clause.literals) {
      if (lit.rel != Rel::NeqZero) continue;
      if (!entails_zero(forced, lit.term)) {
        chosen.push_back(lit.term);
        break;
      }
    }
  }
  if (chosen.size() != remaining.size())
    throw InternalError("surviving clause without an unblocked disequality");

  std::optional<Point> base = lp_feasible(forced);
  if (!base) throw InternalError("fixpoint polyhedron became infeasible");
  std::vector<Point> anchors;
  anchors.push_back(complete_point(*base, vars));
  for (const LinearTerm& term : chosen)
    anchors.push_back(complete_point(nonzero_sample(forced, term), vars));

  const std::size_t m = anchors.size();
  for (long long t = 1; t <= static_cast<long long>(m * m + 1); ++t) {
    // x(t) = sum t^j x_j / sum t^j; for each chosen term the numerator is a
    // nonzero polynomial in t, so some small integer t works.
    Rational weight(1), total(0);
    Point sum;
    for (VarId v : vars) sum.set(v, Rational(0));
    for (const Point& anchor : anchors) {
      for (VarId v : vars) sum.set(v, sum.at(v) + weight * anchor.at(v));
      total += weight;
      weight *= Rational(t);
    }
    Point candidate;
    for (VarId v : vars) candidate.set(v, sum.at(v) / total);
    bool generic = true;
    for (const LinearTerm& term : chosen)
      if (eval_term(term, candidate).is_zero()) {
        generic = false;
        break;
      }
    if (!generic) continue;
    if (!eval_formula(f.cnf, candidate))
      throw InternalError("horn witness failed re-verification");
    return candidate;
  }
  throw InternalError("no generic combination found within the degree bound");
}

SatResult exhaustive_sat(const CnfFormula& f, const Limits& limits) {
  std::set<VarId> vars = free_vars(f);
  for (const Clause& clause : f.clauses)
    if (clause.literals.empty()) return std::nullopt;
  if (f.clauses.empty()) {
    Point zero = complete_point(Point{}, vars);
    return zero;
  }

  std::vector<std::size_t> choice(f.clauses.size(), 0);
  long long used = 0;
  for (;;) {
    if (++used > limits.selections)
      throw SizeLimitError("exhaustive_sat: selection budget exceeded");
    DnfCell cell;
    for (std::size_t i = 0; i < f.clauses.size(); ++i)
      cell.literals.push_back(f.clauses[i].literals[choice[i]]);
    if (std::optional<Point> pt = cell_feasible(cell)) {
      Point full = complete_point(*pt, vars);
      if (!eval_formula(f, full))
        throw InternalError("exhaustive witness failed re-verification");
      return full;
    }
    std::size_t i = f.clauses.size();
    bool rolled = false;
    while (i > 0) {
      --i;
      if (++choice[i] < f.clauses[i].literals.size()) {
        rolled = true;
        break;
      }
      choice[i] = 0;
    }
    if (!rolled) return std::nullopt;
  }
}

}  // namespace dlrkit
