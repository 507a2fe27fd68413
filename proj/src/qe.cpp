#include "dlrkit/qe.hpp"

#include <algorithm>
#include <functional>

namespace dlrkit {

Literal negate_literal(const Literal& lit) {
  switch (lit.rel) {
    case Rel::LeqZero: return lt_zero(-lit.term);
    case Rel::LtZero: return leq_zero(-lit.term);
    case Rel::EqZero: return neq_zero(lit.term);
    case Rel::NeqZero: return eq_zero(lit.term);
  }
  throw InternalError("unknown relation");
}

Polyhedron cell_relaxation(const DnfCell& cell) {
  Polyhedron p;
  for (const Literal& lit : cell.literals) {
    switch (lit.rel) {
      case Rel::LeqZero: p.weak.push_back(lit.term); break;
      case Rel::LtZero: p.strict.push_back(lit.term); break;
      case Rel::EqZero: p.equalities.push_back(lit.term); break;
      case Rel::NeqZero: break;
    }
  }
  return p;
}

namespace {

bool constant_literal_truth(const Literal& lit) {
  const Rational& v = lit.term.constant();
  switch (lit.rel) {
    case Rel::LeqZero: return v.sign() <= 0;
    case Rel::LtZero: return v.sign() < 0;
    case Rel::EqZero: return v.is_zero();
    case Rel::NeqZero: return !v.is_zero();
  }
  throw InternalError("unknown relation");
}

// Dedups literals and folds constant ones; nullopt when the cell is
// syntactically false.
std::optional<DnfCell> simplify_cell(const DnfCell& cell) {
  DnfCell out;
  for (const Literal& lit : cell.literals) {
    if (lit.term.is_constant()) {
      if (!constant_literal_truth(lit)) return std::nullopt;
      continue;
    }
    if (std::find(out.literals.begin(), out.literals.end(), lit) == out.literals.end())
      out.literals.push_back(lit);
  }
  return out;
}

bool relaxation_feasible(const DnfCell& cell) {
  return lp_feasible(cell_relaxation(cell)).has_value();
}

// Dedup key: the literal multiset, which determines the cell's meaning.
using CellKey = std::vector<Literal>;

CellKey cell_key(const DnfCell& cell) {
  CellKey key = cell.literals;
  std::sort(key.begin(), key.end());
  return key;
}

void push_cell_pruned(std::vector<DnfCell>& cells, std::set<CellKey>& seen, const DnfCell& cell,
                      const Limits& limits, const char* what) {
  std::optional<DnfCell> simp = simplify_cell(cell);
  if (!simp) return;
  if (!seen.insert(cell_key(*simp)).second) return;
  if (!relaxation_feasible(*simp)) return;
  if (static_cast<long long>(cells.size()) >= limits.dnf_cells)
    throw SizeLimitError(std::string(what) + ": cell budget exceeded");
  cells.push_back(std::move(*simp));
}

}  // namespace

DnfFormula to_dnf(const CnfFormula& f, const Limits& limits) {
  std::vector<DnfCell> cells{DnfCell{}};
  for (const Clause& clause : f.clauses) {
    std::vector<DnfCell> next;
    std::set<CellKey> seen;
    for (const DnfCell& cell : cells) {
      for (const Literal& lit : clause.literals) {
        DnfCell extended = cell;
        extended.literals.push_back(lit);
        push_cell_pruned(next, seen, extended, limits, "to_dnf");
      }
    }
    cells = std::move(next);
  }
  return DnfFormula{std::move(cells)};
}

CnfFormula to_cnf(const DnfFormula& f, const Limits& limits) {
  // Double negation: the complement expands to a DNF whose infeasible cells
  // are pruned away, and negating that cell list clause-wise lands back in
  // CNF. The naive clause product would explode on unions this size.
  DnfFormula complement = negation_dnf(Formula{f}, limits);
  CnfFormula out;
  for (const DnfCell& cell : complement.cells) {
    Clause clause;
    for (const Literal& lit : cell.literals) clause.literals.push_back(negate_literal(lit));
    out.clauses.push_back(std::move(clause));
  }
  return out;
}

DnfFormula formula_dnf(const Formula& f, const Limits& limits) {
  if (std::holds_alternative<CnfFormula>(f)) return to_dnf(std::get<CnfFormula>(f), limits);
  return std::get<DnfFormula>(f);
}

DnfFormula negation_dnf(const Formula& f, const Limits& limits) {
  if (std::holds_alternative<CnfFormula>(f)) {
    const CnfFormula& g = std::get<CnfFormula>(f);
    DnfFormula out;
    for (const Clause& clause : g.clauses) {
      DnfCell cell;
      for (const Literal& lit : clause.literals) cell.literals.push_back(negate_literal(lit));
      std::optional<DnfCell> simp = simplify_cell(cell);
      if (simp && relaxation_feasible(*simp)) out.cells.push_back(std::move(*simp));
    }
    return out;
  }
  const DnfFormula& g = std::get<DnfFormula>(f);
  CnfFormula negated;
  for (const DnfCell& cell : g.cells) {
    Clause clause;
    for (const Literal& lit : cell.literals) clause.literals.push_back(negate_literal(lit));
    negated.clauses.push_back(std::move(clause));
  }
  return to_dnf(negated, limits);
}

DnfFormula and_dnf(const DnfFormula& a, const DnfFormula& b, const Limits& limits) {
  DnfFormula out;
  std::set<CellKey> seen;
  for (const DnfCell& ca : a.cells) {
    for (const DnfCell& cb : b.cells) {
      DnfCell merged = ca;
      merged.literals.insert(merged.literals.end(), cb.literals.begin(), cb.literals.end());
      push_cell_pruned(out.cells, seen, merged, limits, "and_dnf");
    }
  }
  return out;
}

std::optional<Point> cell_feasible(const DnfCell& cell) {
  Polyhedron base = cell_relaxation(cell);
  std::vector<LinearTerm> exclusions;
  for (const Literal& lit : cell.literals)
    if (lit.rel == Rel::NeqZero) exclusions.push_back(lit.term);
  if (exclusions.size() > 24)
    throw SizeLimitError("cell_feasible: too many disequalities in one cell");

  std::function<std::optional<Point>(std::size_t)> search =
      [&](std::size_t i) -> std::optional<Point> {
    if (i == exclusions.size()) return lp_feasible(base);
    for (int side = 0; side < 2; ++side) {
      base.strict.push_back(side == 0 ? exclusions[i] : -exclusions[i]);
      std::optional<Point> found = search(i + 1);
      base.strict.pop_back();
      if (found) return found;
    }
    return std::nullopt;
  };
  return search(0);
}

namespace {

// Removes one variable from one cell. The result is a small union of cells
// over the remaining variables describing exactly the projection.
std::vector<DnfCell> eliminate_var_cell(const DnfCell& cell, VarId x) {
  struct Bound {
    LinearTerm value;  // x >= value or x <= value
    bool strict;
  };
  std::vector<Literal> rest;
  std::vector<Literal> with_x;
  for (const Literal& lit : cell.literals) {
    if (lit.term.coefficient(x).is_zero())
      rest.push_back(lit);
    else
      with_x.push_back(lit);
  }

  // x = value(other vars) for the solved form of literal a*x + r rel 0.
  auto solved = [&](const Literal& lit) {
    Rational a = lit.term.coefficient(x);
    return lit.term.without(x).scaled(-a.reciprocal());
  };

  for (std::size_t i = 0; i < with_x.size(); ++i) {
    if (with_x[i].rel != Rel::EqZero) continue;
    LinearTerm value = solved(with_x[i]);
    DnfCell out{rest};
    for (std::size_t j = 0; j < with_x.size(); ++j) {
      if (j == i) continue;
      out.literals.push_back(Literal{with_x[j].term.substituted(x, value), with_x[j].rel});
    }
    return {out};
  }

  std::vector<Bound> lowers, uppers;
  std::vector<LinearTerm> exclusions;
  for (const Literal& lit : with_x) {
    Rational a = lit.term.coefficient(x);
    LinearTerm value = solved(lit);
    switch (lit.rel) {
      case Rel::LeqZero:
      case Rel::LtZero: {
        bool strict = lit.rel == Rel::LtZero;
        if (a.sign() > 0)
          uppers.push_back(Bound{value, strict});
        else
          lowers.push_back(Bound{value, strict});
        break;
      }
      case Rel::NeqZero:
        exclusions.push_back(value);
        break;
      case Rel::EqZero:
        throw InternalError("equality handled above");
    }
  }

  std::vector<DnfCell> out;

  // The x-range has nonempty interior iff every lower bound lies strictly
  // below every upper bound; finitely many excluded values cannot empty it.
  DnfCell interior{rest};
  for (const Bound& lo : lowers)
    for (const Bound& hi : uppers) interior.literals.push_back(lt_zero(lo.value - hi.value));
  out.push_back(std::move(interior));

  // Degenerate single-point range: a weak lower bound meets a weak upper
  // bound; substituting that point keeps everything linear.
  for (std::size_t i = 0; i < lowers.size(); ++i) {
    if (lowers[i].strict) continue;
    for (std::size_t j = 0; j < uppers.size(); ++j) {
      if (uppers[j].strict) continue;
      const LinearTerm& point = lowers[i].value;
      DnfCell cellb{rest};
      cellb.literals.push_back(eq_zero(point - uppers[j].value));
      for (std::size_t k = 0; k < lowers.size(); ++k) {
        if (k == i) continue;
        LinearTerm diff = lowers[k].value - point;  // lower_k <= point
        cellb.literals.push_back(lowers[k].strict ? lt_zero(diff) : leq_zero(diff));
      }
      for (std::size_t k = 0; k < uppers.size(); ++k) {
        if (k == j) continue;
        LinearTerm diff = point - uppers[k].value;  // point <= upper_k
        cellb.literals.push_back(uppers[k].strict ? lt_zero(diff) : leq_zero(diff));
      }
      for (const LinearTerm& excl : exclusions)
        cellb.literals.push_back(neq_zero(point - excl));
      out.push_back(std::move(cellb));
    }
  }
  return out;
}

}  // namespace

// Bound elimination leaves sibling cells that differ only in one literal
// being t < 0 versus t = 0; fold such pairs into one t <= 0 cell.
static void merge_boundary_siblings(DnfFormula& dnf) {
  auto sorted_without = [](const DnfCell& cell, std::size_t skip) {
    std::vector<Literal> rest;
    for (std::size_t k = 0; k < cell.literals.size(); ++k)
      if (k != skip) rest.push_back(cell.literals[k]);
    std::sort(rest.begin(), rest.end());
    return rest;
  };
  for (std::size_t i = 0; i < dnf.cells.size(); ++i) {
    for (std::size_t li = 0; li < dnf.cells[i].literals.size(); ++li) {
      if (dnf.cells[i].literals[li].rel != Rel::LtZero) continue;
      const LinearTerm t = dnf.cells[i].literals[li].term;
      const std::vector<Literal> rest = sorted_without(dnf.cells[i], li);
      for (std::size_t j = 0; j < dnf.cells.size(); ++j) {
        if (j == i) continue;
        bool merged = false;
        for (std::size_t lj = 0; lj < dnf.cells[j].literals.size(); ++lj) {
          const Literal& other = dnf.cells[j].literals[lj];
          if (other.rel != Rel::EqZero || other.term != t) continue;
          if (rest != sorted_without(dnf.cells[j], lj)) continue;
          dnf.cells[i].literals[li] = leq_zero(t);
          dnf.cells.erase(dnf.cells.begin() + static_cast<std::ptrdiff_t>(j));
          if (j < i) --i;  // the cell under inspection shifted one slot left
          merged = true;
          break;
        }
        if (merged) break;
      }
    }
  }
}

DnfFormula eliminate_exists(const QuantifiedFormula& f, const Limits& limits) {
  DnfFormula dnf = std::visit([&](const auto& m) { return formula_dnf(Formula{m}, limits); },
                              f.matrix);
  std::vector<VarId> order(f.prefix.rbegin(), f.prefix.rend());
  for (VarId x : order) {
    std::vector<DnfCell> next;
    std::set<CellKey> seen;
    for (const DnfCell& cell : dnf.cells)
      for (const DnfCell& produced : eliminate_var_cell(cell, x))
        push_cell_pruned(next, seen, produced, limits, "eliminate_exists");
    dnf.cells = std::move(next);
    merge_boundary_siblings(dnf);
  }
  return dnf;
}

StandardDefinition standard_definition(const CnfFormula& f, const Limits& limits) {
  // Rewrite into the <= / != alphabet: a strict literal splits its clause into
  // a weak copy and a disequality copy; an equality splits into two weak ones.
  CnfFormula current;
  std::function<void(const Clause&)> expand = [&](const Clause& clause) {
    for (std::size_t i = 0; i < clause.literals.size(); ++i) {
      const Literal lit = clause.literals[i];
      if (lit.rel == Rel::LtZero) {
        Clause weak = clause, excl = clause;
        weak.literals[i] = leq_zero(lit.term);
        excl.literals[i] = neq_zero(lit.term);
        expand(weak);
        expand(excl);
        return;
      }
      if (lit.rel == Rel::EqZero) {
        Clause below = clause, above = clause;
        below.literals[i] = leq_zero(lit.term);
        above.literals[i] = leq_zero(-lit.term);
        expand(below);
        expand(above);
        return;
      }
    }
    Clause dedup;
    for (const Literal& lit : clause.literals)
      if (std::find(dedup.literals.begin(), dedup.literals.end(), lit) == dedup.literals.end())
        dedup.literals.push_back(lit);
    current.clauses.push_back(std::move(dedup));
  };
  for (const Clause& clause : f.clauses) expand(clause);

  const Formula reference{f};
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < current.clauses.size();) {
      CnfFormula candidate = current;
      candidate.clauses.erase(candidate.clauses.begin() + static_cast<std::ptrdiff_t>(i));
      if (equivalent(Formula{candidate}, reference, limits).equal) {
        current = std::move(candidate);
        changed = true;
      } else {
        ++i;
      }
    }
    for (std::size_t i = 0; i < current.clauses.size(); ++i) {
      for (std::size_t j = 0; j < current.clauses[i].literals.size();) {
        CnfFormula candidate = current;
        candidate.clauses[i].literals.erase(candidate.clauses[i].literals.begin() +
                                            static_cast<std::ptrdiff_t>(j));
        if (equivalent(Formula{candidate}, reference, limits).equal) {
          current = std::move(candidate);
          changed = true;
        } else {
          ++j;
        }
      }
    }
  }
  return StandardDefinition{std::move(current), true};
}

Equivalence equivalent(const Formula& f, const Formula& g, const Limits& limits) {
  std::set<VarId> vars = free_vars(f);
  std::set<VarId> gvars = free_vars(g);
  vars.insert(gvars.begin(), gvars.end());

  auto witness_in_difference = [&](const Formula& a,
                                   const Formula& b) -> std::optional<Point> {
    DnfFormula diff = and_dnf(formula_dnf(a, limits), negation_dnf(b, limits), limits);
    for (const DnfCell& cell : diff.cells) {
      std::optional<Point> pt = cell_feasible(cell);
      if (!pt) continue;
      Point full = complete_point(*pt, vars);
      if (eval_formula(a, full) == eval_formula(b, full))
        throw InternalError("equivalence counterexample failed re-verification");
      return full;
    }
    return std::nullopt;
  };

  if (std::optional<Point> pt = witness_in_difference(f, g)) return {false, pt};
  if (std::optional<Point> pt = witness_in_difference(g, f)) return {false, pt};
  return {true, std::nullopt};
}

}  // namespace dlrkit
