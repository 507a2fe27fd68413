#include "dlrkit/lp.hpp"

#include <algorithm>

namespace dlrkit {

std::set<VarId> vars_of(const Polyhedron& p) {
  std::set<VarId> out;
  auto absorb = [&](const std::vector<LinearTerm>& rows) {
    for (const LinearTerm& t : rows)
      for (const auto& [v, c] : t.coefficients()) out.insert(v);
  };
  absorb(p.weak);
  absorb(p.strict);
  absorb(p.equalities);
  return out;
}

bool contains_point(const Polyhedron& p, const Point& x) {
  for (const LinearTerm& t : p.weak)
    if (eval_term(t, x).sign() > 0) return false;
  for (const LinearTerm& t : p.strict)
    if (eval_term(t, x).sign() >= 0) return false;
  for (const LinearTerm& t : p.equalities)
    if (!eval_term(t, x).is_zero()) return false;
  return true;
}

namespace {

// Dense rational tableau in row echelon form w.r.t. the basis:
//   x_basis[i] + sum_{j nonbasic} tab[i][j] * x_j = tab[i][rhs]
//   z + sum_j obj[j] * x_j = obj[rhs]
// Entering column: lowest index with obj[j] < 0 (Bland, no cycling).
// Leaving row: minimum ratio, ties toward the lowest basic column index.
struct Simplex {
  std::size_t ncols = 0;  // structural + slack columns, rhs excluded
  std::vector<std::vector<Rational>> tab;
  std::vector<Rational> obj;
  std::vector<std::size_t> basis;

  std::size_t rows() const { return tab.size(); }

  void pivot(std::size_t r, std::size_t e) {
    Rational inv = tab[r][e].reciprocal();
    for (Rational& v : tab[r]) v *= inv;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r || tab[i][e].is_zero()) continue;
      Rational f = tab[i][e];
      for (std::size_t j = 0; j <= ncols; ++j) tab[i][j] -= f * tab[r][j];
    }
    if (!obj[e].is_zero()) {
      Rational f = obj[e];
      for (std::size_t j = 0; j <= ncols; ++j) obj[j] -= f * tab[r][j];
    }
    basis[r] = e;
  }

  bool is_basic(std::size_t col, std::size_t* row_out = nullptr) const {
    for (std::size_t i = 0; i < rows(); ++i)
      if (basis[i] == col) {
        if (row_out) *row_out = i;
        return true;
      }
    return false;
  }

  // Returns the entering column, or ncols when optimal.
  std::size_t entering() const {
    for (std::size_t j = 0; j < ncols; ++j)
      if (obj[j].sign() < 0 && !is_basic(j)) return j;
    return ncols;
  }

  // Returns the leaving row for column e, or rows() when unbounded.
  std::size_t leaving(std::size_t e) const {
    std::size_t best = rows();
    Rational best_ratio;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (tab[i][e].sign() <= 0) continue;
      Rational ratio = tab[i][ncols] / tab[i][e];
      if (best == rows() || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  // Runs pivots until optimal or unbounded; returns false on unbounded and
  // reports the offending column.
  bool optimize(std::size_t* unbounded_col = nullptr) {
    for (;;) {
      std::size_t e = entering();
      if (e == ncols) return true;
      std::size_t r = leaving(e);
      if (r == rows()) {
        if (unbounded_col) *unbounded_col = e;
        return false;
      }
      pivot(r, e);
    }
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(ncols, Rational(0));
    for (std::size_t i = 0; i < rows(); ++i)
      if (basis[i] < ncols) x[basis[i]] = tab[i][ncols];
    return x;
  }

  // Feasible direction raising the entering column e by one unit.
  std::vector<Rational> ray(std::size_t e) const {
    std::vector<Rational> d(ncols, Rational(0));
    d[e] = Rational(1);
    for (std::size_t i = 0; i < rows(); ++i)
      if (basis[i] < ncols) d[basis[i]] = -tab[i][e];
    return d;
  }
};

enum class StdKind { Infeasible, Optimum, Unbounded };

struct StdResult {
  StdKind kind = StdKind::Infeasible;
  Rational value;
  std::vector<Rational> x;
  std::vector<Rational> ray;
};

// max c.x  s.t.  A x <= b, x >= 0 over exact rationals.
StdResult solve_standard(const std::vector<std::vector<Rational>>& a,
                         const std::vector<Rational>& b, const std::vector<Rational>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  Simplex s;
  s.ncols = n + m;
  s.basis.resize(m);
  s.tab.assign(m, std::vector<Rational>(s.ncols + 1, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) s.tab[i][j] = a[i][j];
    s.tab[i][n + i] = Rational(1);
    s.tab[i][s.ncols] = b[i];
    s.basis[i] = n + i;
  }

  bool need_phase1 = false;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i].sign() < 0) need_phase1 = true;

  if (need_phase1) {
    // Auxiliary column: A x - x0 <= b with x0 >= 0; maximize -x0.
    std::size_t aux = s.ncols;
    s.ncols += 1;
    for (std::size_t i = 0; i < m; ++i) {
      Rational rhs = s.tab[i].back();
      s.tab[i].back() = Rational(-1);  // aux column
      s.tab[i].push_back(rhs);
    }
    s.obj.assign(s.ncols + 1, Rational(0));
    s.obj[aux] = Rational(1);
    // One pivot on the most negative row makes the start feasible.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (s.tab[i][s.ncols] < s.tab[worst][s.ncols]) worst = i;
    s.pivot(worst, aux);
    s.optimize();
    if (!s.obj[s.ncols].is_zero()) {
      StdResult res;
      res.kind = StdKind::Infeasible;
      return res;
    }
    std::size_t aux_row;
    if (s.is_basic(aux, &aux_row)) {
      // Degenerate: drive the auxiliary variable out or drop a null row.
      std::size_t e = s.ncols;
      for (std::size_t j = 0; j < s.ncols; ++j)
        if (j != aux && !s.tab[aux_row][j].is_zero() && !s.is_basic(j)) {
          e = j;
          break;
        }
      if (e < s.ncols) {
        s.pivot(aux_row, e);
      } else {
        s.tab.erase(s.tab.begin() + static_cast<std::ptrdiff_t>(aux_row));
        s.basis.erase(s.basis.begin() + static_cast<std::ptrdiff_t>(aux_row));
      }
    }
    // Remove the auxiliary column (it is the last structural+slack column).
    for (auto& row : s.tab) {
      row[aux] = row.back();
      row.pop_back();
    }
    s.ncols -= 1;
  }

  // Install the real objective and eliminate basic columns from it.
  s.obj.assign(s.ncols + 1, Rational(0));
  for (std::size_t j = 0; j < n; ++j) s.obj[j] = -c[j];
  for (std::size_t i = 0; i < s.rows(); ++i) {
    std::size_t e = s.basis[i];
    if (s.obj[e].is_zero()) continue;
    Rational f = s.obj[e];
    for (std::size_t j = 0; j <= s.ncols; ++j) s.obj[j] -= f * s.tab[i][j];
  }

  std::size_t bad_col = 0;
  StdResult res;
  if (s.optimize(&bad_col)) {
    res.kind = StdKind::Optimum;
    res.value = s.obj[s.ncols];
    res.x = s.solution();
    res.x.resize(n);
  } else {
    res.kind = StdKind::Unbounded;
    res.x = s.solution();
    res.x.resize(n);
    res.ray = s.ray(bad_col);
    res.ray.resize(n);
  }
  return res;
}

// Column layout: variable k (ascending VarId) owns columns 2k (positive part)
// and 2k+1 (negative part), so Bland's lowest-column tie break follows the
// lowest VarId.
struct ColumnMap {
  std::vector<VarId> vars;

  explicit ColumnMap(const std::set<VarId>& vs) : vars(vs.begin(), vs.end()) {}

  std::size_t columns() const { return 2 * vars.size(); }

  std::vector<Rational> row(const LinearTerm& t) const {
    std::vector<Rational> out(columns(), Rational(0));
    for (std::size_t k = 0; k < vars.size(); ++k) {
      Rational c = t.coefficient(vars[k]);
      if (c.is_zero()) continue;
      out[2 * k] = c;
      out[2 * k + 1] = -c;
    }
    return out;
  }

  Point point(const std::vector<Rational>& x) const {
    Point p;
    for (std::size_t k = 0; k < vars.size(); ++k) p.set(vars[k], x[2 * k] - x[2 * k + 1]);
    return p;
  }

  std::map<VarId, Rational> direction(const std::vector<Rational>& d) const {
    std::map<VarId, Rational> out;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      Rational v = d[2 * k] - d[2 * k + 1];
      if (!v.is_zero()) out[vars[k]] = v;
    }
    return out;
  }
};

StdResult solve_polyhedron(const LinearTerm& objective, const Polyhedron& p,
                           const ColumnMap& cols) {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  auto add_row = [&](const LinearTerm& t) {  // t <= 0
    a.push_back(cols.row(t));
    b.push_back(-t.constant());
  };
  for (const LinearTerm& t : p.weak) add_row(t);
  for (const LinearTerm& t : p.equalities) {
    add_row(t);
    add_row(-t);
  }
  std::vector<Rational> c(cols.columns(), Rational(0));
  for (std::size_t k = 0; k < cols.vars.size(); ++k) {
    Rational cv = objective.coefficient(cols.vars[k]);
    c[2 * k] = cv;
    c[2 * k + 1] = -cv;
  }
  return solve_standard(a, b, c);
}

Rational dot_with_direction(const LinearTerm& t, const std::map<VarId, Rational>& d) {
  Rational acc;
  for (const auto& [v, c] : t.coefficients()) {
    auto it = d.find(v);
    if (it != d.end()) acc += c * it->second;
  }
  return acc;
}

// Equality rows pin variables exactly; substituting them away before the
// simplex keeps the tableau small on equality-heavy systems. Each eliminated
// expression only references variables still alive at its own step, so
// reconstruction walks the list backwards.
struct Elimination {
  VarId var;
  LinearTerm expr;
};

struct Presolved {
  bool infeasible = false;
  Polyhedron reduced;  // no equality rows
  std::vector<Elimination> eliminated;
  LinearTerm objective;
};

Presolved presolve_equalities(const LinearTerm& objective, const Polyhedron& p) {
  Presolved out;
  out.reduced.weak = p.weak;
  out.reduced.strict = p.strict;
  out.objective = objective;
  std::vector<LinearTerm> pending = p.equalities;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const LinearTerm row = pending[i];
    if (row.is_constant()) {
      if (!row.constant().is_zero()) {
        out.infeasible = true;
        return out;
      }
      continue;
    }
    VarId x = row.coefficients().begin()->first;
    Rational a = row.coefficients().begin()->second;
    LinearTerm expr = row.without(x).scaled(-a.reciprocal());
    for (std::size_t j = i + 1; j < pending.size(); ++j)
      pending[j] = pending[j].substituted(x, expr);
    for (LinearTerm& t : out.reduced.weak) t = t.substituted(x, expr);
    for (LinearTerm& t : out.reduced.strict) t = t.substituted(x, expr);
    out.objective = out.objective.substituted(x, expr);
    out.eliminated.push_back(Elimination{x, expr});
  }
  return out;
}

Point reconstruct_point(Point reduced_point, const std::vector<Elimination>& eliminated) {
  for (auto it = eliminated.rbegin(); it != eliminated.rend(); ++it) {
    Rational value = it->expr.constant();
    for (const auto& [v, c] : it->expr.coefficients())
      value += c * (reduced_point.has(v) ? reduced_point.at(v) : Rational(0));
    reduced_point.set(it->var, value);
  }
  return reduced_point;
}

std::map<VarId, Rational> reconstruct_ray(std::map<VarId, Rational> ray,
                                          const std::vector<Elimination>& eliminated) {
  for (auto it = eliminated.rbegin(); it != eliminated.rend(); ++it) {
    Rational value = dot_with_direction(it->expr, ray);
    if (!value.is_zero()) ray[it->var] = value;
  }
  return ray;
}

}  // namespace

LpOutcome lp_optimize(const LinearTerm& objective, const Polyhedron& p) {
  if (!p.strict.empty())
    throw StrictNotSupportedError("lp_optimize requires a polyhedron without strict rows");
  Presolved pre = presolve_equalities(objective, p);
  if (pre.infeasible) return LpInfeasible{};

  // Every original variable either survives into the reduced system (even if
  // unconstrained there) or is reconstructed from the eliminated list.
  std::set<VarId> vars = vars_of(p);
  for (const auto& [v, c] : objective.coefficients()) vars.insert(v);
  for (const Elimination& e : pre.eliminated) vars.erase(e.var);
  ColumnMap cols(vars);
  StdResult res = solve_polyhedron(pre.objective, pre.reduced, cols);
  switch (res.kind) {
    case StdKind::Infeasible:
      return LpInfeasible{};
    case StdKind::Optimum: {
      LpOptimum out{res.value + pre.objective.constant(),
                    reconstruct_point(cols.point(res.x), pre.eliminated)};
      if (!contains_point(p, out.witness) || eval_term(objective, out.witness) != out.value)
        throw InternalError("lp optimum failed re-verification");
      return out;
    }
    case StdKind::Unbounded: {
      LpUnbounded out{reconstruct_point(cols.point(res.x), pre.eliminated),
                      reconstruct_ray(cols.direction(res.ray), pre.eliminated)};
      bool ok = contains_point(p, out.witness) &&
                dot_with_direction(objective, out.ray).sign() > 0;
      for (const LinearTerm& t : p.weak)
        ok = ok && dot_with_direction(t, out.ray).sign() <= 0;
      for (const LinearTerm& t : p.equalities)
        ok = ok && dot_with_direction(t, out.ray).is_zero();
      if (!ok) throw InternalError("lp ray failed re-verification");
      return out;
    }
  }
  throw InternalError("unreachable lp outcome");
}

std::optional<Point> lp_feasible(const Polyhedron& p) {
  if (p.strict.empty()) {
    LpOutcome res = lp_optimize(LinearTerm(), p);
    if (std::holds_alternative<LpInfeasible>(res)) return std::nullopt;
    Point w = std::get<LpOptimum>(res).witness;
    if (!contains_point(p, w)) throw InternalError("feasible point failed re-verification");
    return w;
  }

  // Strict rows: maximize a fresh slack eps with t + eps <= 0 per strict row
  // and eps <= 1; the system is strictly feasible iff the optimum is positive.
  std::set<VarId> vars = vars_of(p);
  VarId eps{vars.empty() ? 0 : vars.rbegin()->index + 1};
  LinearTerm eps_term = LinearTerm::variable(eps);
  Polyhedron lifted;
  lifted.weak = p.weak;
  for (const LinearTerm& t : p.strict) lifted.weak.push_back(t + eps_term);
  lifted.weak.push_back(eps_term.plus_constant(Rational(-1)));
  lifted.equalities = p.equalities;

  LpOutcome res = lp_optimize(eps_term, lifted);
  if (std::holds_alternative<LpInfeasible>(res)) return std::nullopt;
  if (std::holds_alternative<LpUnbounded>(res))
    throw InternalError("bounded slack reported unbounded");
  const LpOptimum& opt = std::get<LpOptimum>(res);
  if (opt.value.sign() <= 0) return std::nullopt;
  Point w = opt.witness;
  w.values.erase(eps);
  if (!contains_point(p, w)) throw InternalError("strict witness failed re-verification");
  return w;
}

bool entails_zero(const Polyhedron& p, const LinearTerm& t) {
  if (!p.strict.empty())
    throw StrictNotSupportedError("entails_zero requires a polyhedron without strict rows");
  LpOutcome hi = lp_optimize(t, p);
  if (std::holds_alternative<LpInfeasible>(hi))
    throw EmptyInputError("entails_zero on an infeasible polyhedron");
  if (std::holds_alternative<LpUnbounded>(hi)) return false;
  if (!std::get<LpOptimum>(hi).value.is_zero()) return false;
  LpOutcome lo = lp_optimize(-t, p);
  if (std::holds_alternative<LpUnbounded>(lo)) return false;
  return std::get<LpOptimum>(lo).value.is_zero();
}

}  // namespace dlrkit
