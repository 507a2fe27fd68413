#pragma once

#include <optional>

#include "dlrkit/core.hpp"
#include "dlrkit/lp.hpp"

namespace dlrkit {

/// Expansion budgets. Exceeding one raises SizeLimitError.
struct Limits {
  long long dnf_cells = 100000;
  long long selections = 1000000;
};

/// not(t <= 0) = -t < 0, not(t < 0) = -t <= 0, not(t = 0) = t != 0,
/// not(t != 0) = t = 0.
Literal negate_literal(const Literal& lit);

/// Distributes clauses into cells; cells whose weak/strict/equality part is
/// LP-infeasible are dropped on the fly (disequalities are ignored while
/// pruning, which only ever keeps a few more cells).
DnfFormula to_dnf(const CnfFormula& f, const Limits& limits = {});

/// Dual distribution: one clause per choice of a literal from every cell.
CnfFormula to_cnf(const DnfFormula& f, const Limits& limits = {});

DnfFormula formula_dnf(const Formula& f, const Limits& limits = {});
DnfFormula negation_dnf(const Formula& f, const Limits& limits = {});
DnfFormula and_dnf(const DnfFormula& a, const DnfFormula& b, const Limits& limits = {});

/// Feasibility of a single cell, splitting every disequality into its two
/// strict sides. Returns an exact rational point on success.
std::optional<Point> cell_feasible(const DnfCell& cell);

/// The cell's weak/strict/equality rows with disequalities dropped.
Polyhedron cell_relaxation(const DnfCell& cell);

/// CNF over {<= 0, != 0} literals only, equivalent to its source, from which
/// no single literal (and no whole clause) can be dropped without changing
/// the defined set.
struct StandardDefinition {
  CnfFormula cnf;
  bool minimal = false;
};

StandardDefinition standard_definition(const CnfFormula& f, const Limits& limits = {});

/// Eliminates a purely existential prefix, innermost variable first, by
/// per-cell Fourier-Motzkin extended with disequalities on the eliminated
/// variable. The output stays in the <=, <, =, != literal alphabet.
DnfFormula eliminate_exists(const QuantifiedFormula& f, const Limits& limits = {});

struct Equivalence {
  bool equal = false;
  std::optional<Point> counterexample;  // point where exactly one side holds
};

/// Exact semantic equivalence: the symmetric difference is expanded to DNF
/// and every cell is tested for feasibility.
Equivalence equivalent(const Formula& f, const Formula& g, const Limits& limits = {});

}  // namespace dlrkit
