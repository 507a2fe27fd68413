#pragma once

#include <optional>
#include <variant>

#include "dlrkit/solver.hpp"

namespace dlrkit {

struct GlpProblem {
  HornDlrFormula formula;
  LinearTerm objective;
  std::optional<Rational> threshold;
};

struct GlpInfeasible {};
struct GlpUnbounded {};
struct GlpOptimum {
  Rational value;
  Point witness;
};
/// The objective approaches value but never attains it: the probe satisfies
/// the formula with objective >= value - probe_gap, while formula restricted
/// to objective = value is separately certified unsatisfiable.
struct GlpSupremum {
  Rational value;
  Point probe;
  Rational probe_gap;
};
using GlpResult = std::variant<GlpInfeasible, GlpUnbounded, GlpOptimum, GlpSupremum>;

/// Deletes every disequality literal whose conjunction with the formula is
/// unsatisfiable (each removal is set-preserving, so all distinct literals
/// are tested against the original formula in one pass). nullopt when a
/// clause loses all its literals, i.e. the input was unsatisfiable.
std::optional<HornDlrFormula> star_preprocess(const HornDlrFormula& f);

/// Maximizes the objective over the solution set of a Horn-DLR formula.
/// After preprocessing, the disequality-free clauses form a plain polyhedron;
/// its LP optimum K either is attained by the full formula (optimum), is
/// approached arbitrarily closely (supremum), or no finite bound exists.
GlpResult glp_solve(const GlpProblem& p);

/// Decision form: is there a solution with objective >= threshold?
bool glp_decide(const GlpProblem& p);

}  // namespace dlrkit
