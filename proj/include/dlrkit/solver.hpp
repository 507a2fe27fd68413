#pragma once

#include <optional>
#include <string>
#include <variant>

#include "dlrkit/qe.hpp"

namespace dlrkit {

/// CNF in which every clause is a disjunction of disequalities, optionally
/// with one weak-inequality literal. Construct through recognize_horn_dlr (or
/// by operations that preserve the shape).
struct HornDlrFormula {
  CnfFormula cnf;
};

struct HornRejection {
  std::size_t clause_index = 0;
  std::string reason;
};

/// Shape check after literal normalization. Strict and equality literals are
/// rejected rather than converted; callers that want the conversion apply
/// standard_definition first.
std::variant<HornDlrFormula, HornRejection> recognize_horn_dlr(const CnfFormula& f);

/// nullopt = unsatisfiable; otherwise a rational witness, re-verified by
/// evaluation before being returned.
using SatResult = std::optional<Point>;

/// Unit-propagation / entailment fixpoint: grow the conjunction of forced
/// weak literals, firing a clause whenever all its disequalities are entailed
/// to vanish. At the fixpoint a witness is assembled from one generic convex
/// combination of per-clause points.
SatResult horn_dlr_sat(const HornDlrFormula& f);

/// Brute-force satisfiability for arbitrary normalized CNF: one literal is
/// selected from each clause, every selection is tested as a cell (with
/// disequalities split into their two strict sides).
SatResult exhaustive_sat(const CnfFormula& f, const Limits& limits = {});

}  // namespace dlrkit
