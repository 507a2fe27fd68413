#include "dlrkit/reductions.hpp"

#include <algorithm>

namespace dlrkit {

namespace {

// Emits PLUS/ONE atoms for integer linear gadgets. Shared 0/1/-1 helper
// variables are minted lazily.
class GadgetBuilder {
 public:
  explicit GadgetBuilder(VarPool& pool) : pool_(pool) {}

  std::vector<VarId> existentials;
  std::vector<CspAtom> atoms;

  VarId fresh(const std::string& hint) {
    VarId v = pool_.fresh(hint);
    existentials.push_back(v);
    return v;
  }

  void plus(VarId a, VarId b, VarId c) { atoms.push_back(CspAtom{CspAtom::Kind::Plus, {a, b, c}}); }

  VarId zero() {
    if (!zero_) {
      zero_ = fresh("_zero");
      plus(*zero_, *zero_, *zero_);  // z + z = z pins z to 0
    }
    return *zero_;
  }

  VarId one() {
    if (!one_) {
      one_ = fresh("_one");
      atoms.push_back(CspAtom{CspAtom::Kind::One, {*one_}});
    }
    return *one_;
  }

  void equal(VarId a, VarId b) { plus(a, zero(), b); }

  // v = n * x for n >= 1: doubling chain a_i = 2^(i-1) x with a prefix sum
  // over the set bits of n.
  VarId positive_multiple(VarId x, const BigInt& n) {
    std::size_t bits = bit_length(n);
    std::vector<VarId> chain{x};
    for (std::size_t i = 1; i < bits; ++i) {
      VarId next = fresh("_dbl");
      plus(chain.back(), chain.back(), next);
      chain.push_back(next);
    }
    std::optional<VarId> acc;
    for (std::size_t i = 0; i < bits; ++i) {
      if (!boost::multiprecision::bit_test(n, static_cast<unsigned>(i))) continue;
      if (!acc) {
        acc = chain[i];
      } else {
        VarId next = fresh("_sum");
        plus(chain[i], *acc, next);
        acc = next;
      }
    }
    return *acc;
  }

  VarId scaled(VarId x, const BigInt& n) {
    if (n.is_zero()) return zero();
    if (n > 0) return positive_multiple(x, n);
    VarId pos = positive_multiple(x, -n);
    VarId neg = fresh("_neg");
    plus(pos, neg, zero());
    return neg;
  }

  VarId constant(const BigInt& n) {
    if (n.is_zero()) return zero();
    if (n == 1) return one();
    return scaled(one(), n);
  }

  // v = n1*x1 + n2*x2 with the sign case split on the final conjunct.
  VarId pair_sum(const BigInt& n1, VarId x1, const BigInt& n2, VarId x2) {
    if (n1.is_zero()) return scaled(x2, n2);
    if (n2.is_zero()) return scaled(x1, n1);
    VarId out = fresh("_v");
    if (n1 > 0 && n2 > 0) {
      plus(positive_multiple(x1, n1), positive_multiple(x2, n2), out);
    } else if (n1 > 0 && n2 < 0) {
      VarId u = positive_multiple(x1, n1), w = positive_multiple(x2, -n2);
      plus(w, out, u);  // w + v = u
    } else if (n1 < 0 && n2 > 0) {
      VarId u = positive_multiple(x1, -n1), w = positive_multiple(x2, n2);
      plus(u, out, w);  // u + v = w
    } else {
      VarId u = positive_multiple(x1, -n1), w = positive_multiple(x2, -n2);
      VarId s = fresh("_s");
      plus(u, w, s);
      plus(s, out, zero());  // v = -(u + w)
    }
    return out;
  }

  // v = sum of n_i * x_i; the head pair is combined with the recursively
  // built tail through one shared fresh variable.
  VarId signed_sum(const std::vector<std::pair<BigInt, VarId>>& terms) {
    if (terms.empty()) return zero();
    if (terms.size() == 1) return scaled(terms[0].second, terms[0].first);
    if (terms.size() == 2)
      return pair_sum(terms[0].first, terms[0].second, terms[1].first, terms[1].second);
    VarId head = pair_sum(terms[0].first, terms[0].second, terms[1].first, terms[1].second);
    std::vector<std::pair<BigInt, VarId>> tail(terms.begin() + 2, terms.end());
    VarId rest = signed_sum(tail);
    VarId out = fresh("_u");
    plus(head, rest, out);
    return out;
  }

 private:
  VarPool& pool_;
  std::optional<VarId> zero_;
  std::optional<VarId> one_;
};

BigInt lcm_of_denominators(const std::map<VarId, Rational>& coeffs, const Rational& rhs) {
  BigInt l = rhs.denominator();
  for (const auto& [v, c] : coeffs) l = boost::multiprecision::lcm(l, c.denominator());
  return l;
}

BigInt integer_scaled(const Rational& c, const BigInt& l) {
  return c.numerator() * (l / c.denominator());
}

}  // namespace

PpFormula compile_linear_equation(const std::map<VarId, Rational>& coeffs, const Rational& rhs,
                                  VarPool& pool) {
  bool any_nonzero = false;
  for (const auto& [v, c] : coeffs) any_nonzero = any_nonzero || !c.is_zero();
  if (!any_nonzero)
    throw AllZeroCoefficientsError("equation with all-zero coefficients");

  // Clearing denominators with the lcm keeps the integers small; the product
  // of denominators would do as well.
  BigInt l = lcm_of_denominators(coeffs, rhs);
  GadgetBuilder builder(pool);
  std::vector<std::pair<BigInt, VarId>> terms;
  PpFormula out;
  for (const auto& [v, c] : coeffs) {
    if (c.is_zero()) continue;
    out.free_variables.push_back(v);
    terms.emplace_back(integer_scaled(c, l), v);
  }
  VarId total = builder.signed_sum(terms);
  VarId target = builder.constant(integer_scaled(rhs, l));
  builder.equal(total, target);
  out.existentials = std::move(builder.existentials);
  out.atoms = std::move(builder.atoms);
  return out;
}

namespace {

void append_atom_literals(const std::vector<CspAtom>& atoms, CnfFormula& out) {
  for (const CspAtom& atom : atoms) {
    switch (atom.kind) {
      case CspAtom::Kind::Plus: {
        LinearTerm t = LinearTerm::variable(atom.args[0]) + LinearTerm::variable(atom.args[1]) -
                       LinearTerm::variable(atom.args[2]);
        out.clauses.push_back(Clause{{eq_zero(t)}});
        break;
      }
      case CspAtom::Kind::One:
        out.clauses.push_back(
            Clause{{eq_zero(LinearTerm::variable(atom.args[0]).plus_constant(Rational(-1)))}});
        break;
      case CspAtom::Kind::Leq:
        out.clauses.push_back(Clause{
            {leq_zero(LinearTerm::variable(atom.args[0]) - LinearTerm::variable(atom.args[1]))}});
        break;
      case CspAtom::Kind::Rel:
        throw InternalError("REL atom outside csp_to_cnf");
    }
  }
}

}  // namespace

bool pp_accepts(const PpFormula& pp, const Point& x) {
  // The gadget chains define each auxiliary variable from earlier ones, so a
  // single forward pass of unit propagation decides membership. Should an
  // atom ever carry two unknowns, fall back to the general LP.
  std::map<VarId, Rational> values;
  for (VarId v : pp.free_variables) values[v] = x.at(v);
  bool stuck = false;
  for (const CspAtom& atom : pp.atoms) {
    if (atom.kind == CspAtom::Kind::One) {
      auto [it, inserted] = values.try_emplace(atom.args[0], Rational(1));
      if (!inserted && it->second != Rational(1)) return false;
      continue;
    }
    if (atom.kind != CspAtom::Kind::Plus) {
      stuck = true;
      break;
    }
    std::map<VarId, Rational> coeff;  // x + y - z = 0 with repeats collapsed
    coeff[atom.args[0]] += Rational(1);
    coeff[atom.args[1]] += Rational(1);
    coeff[atom.args[2]] -= Rational(1);
    Rational known(0);
    std::optional<VarId> unknown;
    Rational unknown_coeff;
    int unknowns = 0;
    for (const auto& [v, c] : coeff) {
      if (c.is_zero()) continue;
      auto it = values.find(v);
      if (it != values.end()) {
        known += c * it->second;
      } else {
        ++unknowns;
        unknown = v;
        unknown_coeff = c;
      }
    }
    if (unknowns == 0) {
      if (!known.is_zero()) return false;
    } else if (unknowns == 1) {
      values[*unknown] = -known / unknown_coeff;
    } else {
      stuck = true;
      break;
    }
  }
  if (!stuck) return true;

  CnfFormula system;
  append_atom_literals(pp.atoms, system);
  Polyhedron p;
  for (const Clause& clause : system.clauses) {
    const Literal& lit = clause.literals[0];
    if (lit.rel == Rel::EqZero)
      p.equalities.push_back(lit.term);
    else
      p.weak.push_back(lit.term);
  }
  for (VarId v : pp.free_variables)
    p.equalities.push_back(LinearTerm::variable(v).plus_constant(-x.at(v)));
  return lp_feasible(p).has_value();
}

CspInstance lp_to_csp(const std::vector<std::pair<LinearTerm, Rational>>& rows, VarPool& pool) {
  CspInstance out;
  std::set<VarId> seen;
  auto note_var = [&](VarId v) {
    if (seen.insert(v).second) out.variables.push_back(v);
  };

  for (const auto& [term, bound] : rows) {
    Rational rhs = bound - term.constant();
    for (const auto& [v, c] : term.coefficients()) note_var(v);

    VarId slack = pool.fresh("_y");
    note_var(slack);
    std::map<VarId, Rational> eq = term.coefficients();
    eq[slack] = Rational(-1);
    PpFormula eqf = compile_linear_equation(eq, Rational(0), pool);
    for (VarId v : eqf.existentials) note_var(v);
    out.atoms.insert(out.atoms.end(), eqf.atoms.begin(), eqf.atoms.end());

    VarId pin = pool.fresh("_k");
    note_var(pin);
    PpFormula pinf =
        compile_linear_equation({{pin, Rational(1)}}, rhs, pool);
    for (VarId v : pinf.existentials) note_var(v);
    out.atoms.insert(out.atoms.end(), pinf.atoms.begin(), pinf.atoms.end());

    out.atoms.push_back(CspAtom{CspAtom::Kind::Leq, {slack, pin}});
  }
  return out;
}

CnfFormula csp_to_cnf(const CspInstance& instance, const Limits& limits) {
  CnfFormula out;
  std::optional<CnfFormula> user_cnf;
  if (instance.user) {
    if (std::holds_alternative<CnfFormula>(instance.user->definition))
      user_cnf = std::get<CnfFormula>(instance.user->definition);
    else
      user_cnf = to_cnf(std::get<DnfFormula>(instance.user->definition), limits);
  }

  std::vector<CspAtom> base;
  for (const CspAtom& atom : instance.atoms) {
    if (atom.kind != CspAtom::Kind::Rel) {
      base.push_back(atom);
      continue;
    }
    if (!instance.user) throw InvalidParamsError("REL atom without a user relation");
    if (atom.args.size() != instance.user->params.size())
      throw InvalidParamsError("REL atom arity mismatch");
    for (const Clause& clause : user_cnf->clauses) {
      Clause mapped;
      for (const Literal& lit : clause.literals) {
        LinearTerm t = lit.term;
        for (std::size_t i = 0; i < atom.args.size(); ++i)
          t = t.substituted(instance.user->params[i], LinearTerm::variable(atom.args[i]));
        mapped.literals.push_back(Literal{t, lit.rel});
      }
      out.clauses.push_back(std::move(mapped));
    }
  }
  append_atom_literals(base, out);
  return out;
}

SatResult csp_satisfiable(const CspInstance& instance, const Limits& limits) {
  return exhaustive_sat(csp_to_cnf(instance, limits), limits);
}

DnfFormula project_to_unary(const Formula& s, const Point& p, const Point& q, VarId y,
                            const Limits& limits) {
  if (!eval_formula(s, p) || !eval_formula(s, q))
    throw WitnessNotInRelationError("projection endpoints must satisfy the relation");
  std::set<VarId> vars = free_vars(s);
  if (vars.count(y)) throw InvalidParamsError("parameter variable occurs in the relation");

  std::vector<Literal> line;
  for (VarId v : vars) {
    LinearTerm t = LinearTerm::variable(v);
    t.set_coefficient(y, -(q.at(v) - p.at(v)));
    t.set_constant(-p.at(v));
    line.push_back(eq_zero(t));  // v = p_v + (q_v - p_v) y
  }
  Literal lower = leq_zero(-LinearTerm::variable(y));
  Literal upper = leq_zero(LinearTerm::variable(y).plus_constant(Rational(-1)));

  DnfFormula matrix = formula_dnf(s, limits);
  for (DnfCell& cell : matrix.cells) {
    cell.literals.insert(cell.literals.end(), line.begin(), line.end());
    cell.literals.push_back(lower);
    cell.literals.push_back(upper);
  }
  QuantifiedFormula quantified{std::vector<VarId>(vars.begin(), vars.end()), matrix};
  return eliminate_exists(quantified, limits);
}

namespace {

struct GapScan {
  std::vector<Piece> inside;   // U restricted to [0,1]
  std::vector<Piece> outside;  // complement within [0,1]
};

GapScan scan_unary(const Formula& u) {
  std::set<VarId> vars = free_vars(u);
  if (vars.size() != 1)
    throw InvalidParamsError("excluded-interval analysis requires a unary relation");
  VarId x = *vars.begin();
  Point zero, one;
  zero.set(x, Rational(0));
  one.set(x, Rational(1));
  if (!eval_formula(u, zero) || !eval_formula(u, one))
    throw ConditionViolatedError("unary relation must contain 0 and 1");
  SegmentProfile profile = segment_profile(u, zero, one);
  return GapScan{profile.inside, profile.outside};
}

void verify_flank_conditions(const GapScan& scan, const Rational& delta1, const Rational& delta2,
                             const Rational& d) {
  if (pieces_intersect_closed(scan.inside, delta1, delta2))
    throw ConditionViolatedError("[delta1, delta2] intersects the relation");
  if (!pieces_intersect_closed(scan.inside, delta1 - d, delta1))
    throw ConditionViolatedError("no relation point in [delta1 - d, delta1]");
  if (!pieces_intersect_closed(scan.inside, delta2, delta2 + d))
    throw ConditionViolatedError("no relation point in [delta2, delta2 + d]");
}

}  // namespace

ExclusionParams excluded_interval_params(const Formula& u) {
  GapScan scan = scan_unary(u);
  std::optional<Piece> gap;
  for (const Piece& p : scan.outside) {
    if (!p.bounded() || p.length().sign() <= 0) continue;
    if (!gap || p.length() > gap->length()) gap = p;
  }
  if (!gap) throw NoExcludedIntervalError("no excluded interval of positive length");

  // Shrink the widest gap symmetrically by one percent of its length, then
  // verify the flank conditions exactly rather than searching further.
  Rational shrink = gap->length() / Rational(100);
  ExclusionParams params;
  params.delta1 = *gap->lo + shrink;
  params.delta2 = *gap->hi - shrink;
  params.d = (params.delta2 - params.delta1) / Rational(5);
  params.d_prime = Rational(1, 7);
  verify_flank_conditions(scan, params.delta1, params.delta2, params.d);

  std::set<VarId> vars = free_vars(u);
  VarId x = *vars.begin();
  params.p_prime.set(x, params.delta1 - params.d);
  params.q_prime.set(x, params.delta2 + params.d);

  const Rational p_prime = params.p_prime.at(x);
  const Rational q_prime = params.q_prime.at(x);
  if (p_prime + (q_prime - p_prime) / Rational(7) != params.delta1 ||
      p_prime + (q_prime - p_prime) * Rational(6, 7) != params.delta2)
    throw InternalError("rescaling identity failed");
  return params;
}

namespace {

Formula rescaled_unary(const Formula& u, VarId source, const Rational& p_prime,
                       const Rational& q_prime, VarId y) {
  LinearTerm replacement(p_prime);
  replacement.set_coefficient(y, q_prime - p_prime);
  Literal lower = leq_zero(-LinearTerm::variable(y));
  Literal upper = leq_zero(LinearTerm::variable(y).plus_constant(Rational(-1)));

  if (std::holds_alternative<CnfFormula>(u)) {
    CnfFormula out;
    for (const Clause& clause : std::get<CnfFormula>(u).clauses) {
      Clause mapped;
      for (const Literal& lit : clause.literals)
        mapped.literals.push_back(Literal{lit.term.substituted(source, replacement), lit.rel});
      out.clauses.push_back(std::move(mapped));
    }
    out.clauses.push_back(Clause{{lower}});
    out.clauses.push_back(Clause{{upper}});
    return out;
  }
  DnfFormula out;
  for (const DnfCell& cell : std::get<DnfFormula>(u).cells) {
    DnfCell mapped;
    for (const Literal& lit : cell.literals)
      mapped.literals.push_back(Literal{lit.term.substituted(source, replacement), lit.rel});
    mapped.literals.push_back(lower);
    mapped.literals.push_back(upper);
    out.cells.push_back(std::move(mapped));
  }
  return out;
}

}  // namespace

CspInstance reduce_one_in_three(const OneInThreeInstance& phi, const Formula& u,
                                const ExclusionParams& params, VarPool& pool,
                                const Limits& /*limits*/) {
  GapScan scan = scan_unary(u);
  try {
    verify_flank_conditions(scan, params.delta1, params.delta2, params.d);
  } catch (const ConditionViolatedError& e) {
    throw InvalidParamsError(e.what());
  }
  std::set<VarId> uvars = free_vars(u);
  VarId source = *uvars.begin();
  const Rational p_prime = params.p_prime.at(source);
  const Rational q_prime = params.q_prime.at(source);

  VarId y = pool.fresh("_uy");
  Formula rescaled = rescaled_unary(u, source, p_prime, q_prime, y);

  // The rescaled relation must live in [0, 1/7] and [6/7, 1] with points on
  // both sides; the clause bounds 6/7 and 11/7 depend on exactly this.
  const Rational d_prime = params.d_prime;
  UnaryDecomposition dec = decompose_unary(rescaled);
  if (!pieces_intersect_closed(dec.pieces, Rational(0), d_prime) ||
      !pieces_intersect_closed(dec.pieces, Rational(1) - d_prime, Rational(1)))
    throw InvalidParamsError("rescaled relation misses a flank of [0,1]");
  for (const Piece& piece : dec.pieces)
    if (!(*piece.hi <= d_prime || *piece.lo >= Rational(1) - d_prime))
      throw InvalidParamsError("rescaled relation enters the forbidden middle interval");

  CspInstance out;
  out.user = UserRelation{"U'", {y}, rescaled};
  std::map<std::string, VarId> by_name;
  for (const std::string& name : phi.variables) {
    VarId v = pool.var(name);
    by_name[name] = v;
    out.variables.push_back(v);
    out.atoms.push_back(CspAtom{CspAtom::Kind::Rel, {v}});
  }

  std::vector<std::pair<LinearTerm, Rational>> rows;
  for (const auto& clause : phi.clauses) {
    LinearTerm sum;
    for (const std::string& name : clause) {
      auto it = by_name.find(name);
      if (it == by_name.end()) throw InvalidParamsError("clause variable not declared: " + name);
      sum.set_coefficient(it->second, sum.coefficient(it->second) + Rational(1));
    }
    rows.emplace_back(-sum, Rational(-6, 7));  // sum >= 6/7
    rows.emplace_back(sum, Rational(11, 7));   // sum <= 11/7
  }
  CspInstance compiled = lp_to_csp(rows, pool);
  for (VarId v : compiled.variables)
    if (std::find(out.variables.begin(), out.variables.end(), v) == out.variables.end())
      out.variables.push_back(v);
  out.atoms.insert(out.atoms.end(), compiled.atoms.begin(), compiled.atoms.end());
  return out;
}

std::optional<std::map<std::string, bool>> brute_force_one_in_three(
    const OneInThreeInstance& phi) {
  if (phi.variables.size() > 20)
    throw SizeLimitError("brute_force_one_in_three: more than 20 variables");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < phi.variables.size(); ++i) index[phi.variables[i]] = i;
  for (const auto& clause : phi.clauses)
    for (const std::string& name : clause)
      if (!index.count(name))
        throw InvalidParamsError("clause variable not declared: " + name);

  const std::uint64_t total = std::uint64_t(1) << phi.variables.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    bool ok = true;
    for (const auto& clause : phi.clauses) {
      int trues = 0;
      for (const std::string& name : clause)
        if (mask >> index[name] & 1) ++trues;
      if (trues != 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::map<std::string, bool> assignment;
    for (std::size_t i = 0; i < phi.variables.size(); ++i)
      assignment[phi.variables[i]] = (mask >> i & 1) != 0;
    return assignment;
  }
  return std::nullopt;
}

}  // namespace dlrkit
