#pragma once

#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "dlrkit/core.hpp"

namespace dlrkit {

/// Conjunction of linear relations: t <= 0 for every weak row, t < 0 for every
/// strict row, t = 0 for every equality row. Closed iff strict is empty.
struct Polyhedron {
  std::vector<LinearTerm> weak;
  std::vector<LinearTerm> strict;
  std::vector<LinearTerm> equalities;

  bool closed() const { return strict.empty(); }
};

std::set<VarId> vars_of(const Polyhedron& p);
bool contains_point(const Polyhedron& p, const Point& x);

struct LpInfeasible {};
struct LpOptimum {
  Rational value;
  Point witness;
};
struct LpUnbounded {
  Point witness;
  std::map<VarId, Rational> ray;  // witness + lambda*ray stays feasible, objective strictly grows
};
using LpOutcome = std::variant<LpInfeasible, LpOptimum, LpUnbounded>;

/// Exact feasibility over weak, strict and equality rows. Strict rows are
/// handled by maximizing a fresh slack bounded by 1 that is added to every
/// strict row; a positive optimum is exactly strict feasibility. Every
/// returned point re-verifies against the input before being handed out.
std::optional<Point> lp_feasible(const Polyhedron& p);

/// Exact maximization of the objective over a polyhedron without strict rows
/// (throws StrictNotSupportedError otherwise). Two-phase primal simplex on
/// rationals with Bland's pivoting rule; pivot ties break toward the lowest
/// variable index, so identical inputs yield identical witnesses.
LpOutcome lp_optimize(const LinearTerm& objective, const Polyhedron& p);

/// True iff t vanishes on all of p, decided by maximizing t and -t.
/// Requires p closed (StrictNotSupportedError) and nonempty (EmptyInputError).
bool entails_zero(const Polyhedron& p, const LinearTerm& t);

}  // namespace dlrkit
