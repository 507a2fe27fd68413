#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlrkit/geometry.hpp"

namespace dlrkit {

/// Atom over the base signature: PLUS(x,y,z) means x+y=z, ONE(x) means x=1,
/// LEQ(x,y) means x<=y; REL applies the instance's user relation.
struct CspAtom {
  enum class Kind { Plus, One, Leq, Rel };
  Kind kind = Kind::Plus;
  std::vector<VarId> args;
};

/// One optional named relation with a stored semi-linear definition; its
/// parameter variables are substituted by the REL atom arguments.
struct UserRelation {
  std::string name;
  std::vector<VarId> params;
  Formula definition;
};

struct CspInstance {
  std::vector<VarId> variables;
  std::vector<CspAtom> atoms;
  std::optional<UserRelation> user;
};

/// Existentially quantified conjunction of PLUS/ONE atoms.
struct PpFormula {
  std::vector<VarId> free_variables;
  std::vector<VarId> existentials;
  std::vector<CspAtom> atoms;
};

/// Conjunction of PLUS/ONE atoms defining sum(coeffs[v] * v) = rhs, built by
/// denominator clearing, doubling chains and bit-selected prefix sums; the
/// atom count is linear in the total bit size of the coefficients.
PpFormula compile_linear_equation(const std::map<VarId, Rational>& coeffs, const Rational& rhs,
                                  VarPool& pool);

/// Whether the pinned point lies in the relation the pp-formula defines.
bool pp_accepts(const PpFormula& pp, const Point& x);

/// Inequalities (term <= bound) become compiled equations term - y = 0 plus
/// LEQ(y, k0) with k0 pinned to the bound; feasibility is preserved exactly.
CspInstance lp_to_csp(const std::vector<std::pair<LinearTerm, Rational>>& rows, VarPool& pool);

/// Expands a CSP instance (including REL atoms through the stored definition)
/// into one CNF whose satisfiability matches the instance.
CnfFormula csp_to_cnf(const CspInstance& instance, const Limits& limits = {});
SatResult csp_satisfiable(const CspInstance& instance, const Limits& limits = {});

/// U(y) := exists z. (z = p + (q-p) y and S(z) and 0 <= y <= 1), returned
/// quantifier-free over y. Throws WitnessNotInRelationError unless p and q
/// satisfy S.
DnfFormula project_to_unary(const Formula& s, const Point& p, const Point& q, VarId y,
                            const Limits& limits = {});

/// Parameters certifying an excluded interval of a unary relation over [0,1]:
/// [delta1, delta2] misses U, U has points within d on both flanks, and the
/// rescaled endpoints satisfy p' + (q'-p')/7 = delta1 exactly.
struct ExclusionParams {
  Rational delta1, delta2, d;
  Point p_prime, q_prime;
  Rational d_prime;  // fixed at 1/7
};

ExclusionParams excluded_interval_params(const Formula& u);

/// Positive triples without negated literals.
struct OneInThreeInstance {
  std::vector<std::string> variables;
  std::vector<std::array<std::string, 3>> clauses;
};

/// The hardness gadget: every variable is constrained by the rescaled unary
/// relation U' (supported on [0,1/7] and [6/7,1]) and every clause by
/// 6/7 <= v_i+v_j+v_k <= 11/7, all compiled into base-signature atoms.
CspInstance reduce_one_in_three(const OneInThreeInstance& phi, const Formula& u,
                                const ExclusionParams& params, VarPool& pool,
                                const Limits& limits = {});

/// Exhaustive enumeration, at most 20 variables.
std::optional<std::map<std::string, bool>> brute_force_one_in_three(
    const OneInThreeInstance& phi);

}  // namespace dlrkit
