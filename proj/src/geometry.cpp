#include "dlrkit/geometry.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace dlrkit {

bool Piece::contains(const Rational& x) const {
  if (lo) {
    if (x < *lo) return false;
    if (x == *lo && !lo_closed) return false;
  }
  if (hi) {
    if (x > *hi) return false;
    if (x == *hi && !hi_closed) return false;
  }
  return true;
}

namespace {

bool piece_empty(const Piece& p) {
  if (!p.lo || !p.hi) return false;
  if (*p.lo > *p.hi) return true;
  if (*p.lo == *p.hi) return !(p.lo_closed && p.hi_closed);
  return false;
}

bool starts_before(const Piece& a, const Piece& b) {
  if (!a.lo) return b.lo.has_value();
  if (!b.lo) return false;
  if (*a.lo != *b.lo) return *a.lo < *b.lo;
  return a.lo_closed && !b.lo_closed;
}

// a and b overlap or touch without a hole between them (a starts first).
bool merges_with(const Piece& a, const Piece& b) {
  if (!a.hi) return true;
  if (!b.lo) return true;
  if (*a.hi > *b.lo) return true;
  if (*a.hi < *b.lo) return false;
  return a.hi_closed || b.lo_closed;
}

}  // namespace

std::vector<Piece> canonical_pieces(std::vector<Piece> pieces) {
  pieces.erase(std::remove_if(pieces.begin(), pieces.end(), piece_empty), pieces.end());
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return starts_before(a, b); });
  std::vector<Piece> out;
  for (const Piece& p : pieces) {
    if (!out.empty() && merges_with(out.back(), p)) {
      Piece& prev = out.back();
      bool extend = !p.hi || (prev.hi && *prev.hi < *p.hi) ||
                    (prev.hi && p.hi && *prev.hi == *p.hi && p.hi_closed);
      if (!prev.hi) extend = false;
      if (extend) {
        prev.hi = p.hi;
        prev.hi_closed = p.hi_closed;
      }
    } else {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Piece> complement_within(const std::vector<Piece>& pieces, const Rational& a,
                                     const Rational& b) {
  std::vector<Piece> clipped;
  for (Piece p : pieces) {
    if (!p.lo || *p.lo < a) {
      p.lo = a;
      p.lo_closed = true;
    }
    if (!p.hi || *p.hi > b) {
      p.hi = b;
      p.hi_closed = true;
    }
    if (!piece_empty(p)) clipped.push_back(p);
  }
  clipped = canonical_pieces(std::move(clipped));

  std::vector<Piece> out;
  Rational cursor = a;
  bool cursor_in = true;  // whether cursor itself is still uncovered
  for (const Piece& p : clipped) {
    const Rational& start = *p.lo;
    if (cursor < start || (cursor == start && cursor_in && !p.lo_closed)) {
      Piece gap;
      gap.lo = cursor;
      gap.lo_closed = cursor_in;
      gap.hi = start;
      gap.hi_closed = !p.lo_closed;
      if (!piece_empty(gap)) out.push_back(gap);
    }
    cursor = *p.hi;
    cursor_in = !p.hi_closed;
  }
  if (cursor < b || (cursor == b && cursor_in)) {
    Piece gap;
    gap.lo = cursor;
    gap.lo_closed = cursor_in;
    gap.hi = b;
    gap.hi_closed = true;
    if (!piece_empty(gap)) out.push_back(gap);
  }
  return out;
}

bool pieces_contain(const std::vector<Piece>& pieces, const Rational& x) {
  for (const Piece& p : pieces)
    if (p.contains(x)) return true;
  return false;
}

bool pieces_intersect_closed(const std::vector<Piece>& pieces, const Rational& a,
                             const Rational& b) {
  for (const Piece& p : pieces) {
    Piece clipped = p;
    if (!clipped.lo || *clipped.lo < a) {
      clipped.lo = a;
      clipped.lo_closed = true;
    }
    if (!clipped.hi || *clipped.hi > b) {
      clipped.hi = b;
      clipped.hi_closed = true;
    }
    if (!piece_empty(clipped)) return true;
  }
  return false;
}

UnaryDecomposition decompose_unary(const Formula& f) {
  std::set<VarId> vars = free_vars(f);
  if (vars.size() != 1) throw Error("decompose_unary requires exactly one free variable");
  VarId x = *vars.begin();

  std::vector<Rational> roots;
  for (const Literal* lit : literals_of(f)) {
    Rational a = lit->term.coefficient(x);
    if (a.is_zero()) continue;
    Rational root = -(lit->term.constant() / a);
    if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end());

  auto truth_at = [&](const Rational& value) {
    Point pt;
    pt.set(x, value);
    return eval_formula(f, pt);
  };

  std::vector<Piece> pieces;
  if (roots.empty()) {
    if (truth_at(Rational(0))) pieces.push_back(Piece{});
    return UnaryDecomposition{pieces};
  }
  if (truth_at(roots.front() - Rational(1)))
    pieces.push_back(Piece{std::nullopt, roots.front(), false, false});
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (truth_at(roots[i])) pieces.push_back(Piece{roots[i], roots[i], true, true});
    if (i + 1 < roots.size()) {
      Rational mid = (roots[i] + roots[i + 1]) / Rational(2);
      if (truth_at(mid)) pieces.push_back(Piece{roots[i], roots[i + 1], false, false});
    }
  }
  if (truth_at(roots.back() + Rational(1)))
    pieces.push_back(Piece{roots.back(), std::nullopt, false, false});
  return UnaryDecomposition{canonical_pieces(std::move(pieces))};
}

namespace {

Literal substitute_segment(const Literal& lit, const Point& p, const Point& q, VarId t) {
  Rational slope(0), offset = lit.term.constant();
  for (const auto& [v, c] : lit.term.coefficients()) {
    slope += c * (q.at(v) - p.at(v));
    offset += c * p.at(v);
  }
  LinearTerm out(offset);
  out.set_coefficient(t, slope);
  return Literal{out, lit.rel};
}

VarId fresh_var_index(const std::set<VarId>& used) {
  return VarId{used.empty() ? 0 : used.rbegin()->index + 1};
}

}  // namespace

SegmentProfile segment_profile(const Formula& f, const Point& p, const Point& q) {
  if (p == q) throw InvalidParamsError("segment endpoints must differ");
  if (std::holds_alternative<DnfFormula>(f) && std::get<DnfFormula>(f).cells.empty()) {
    SegmentProfile profile;
    profile.outside.push_back(Piece{Rational(0), Rational(1), true, true});
    return profile;
  }
  std::set<VarId> used = free_vars(f);
  for (const auto& [v, r] : p.values) used.insert(v);
  for (const auto& [v, r] : q.values) used.insert(v);
  VarId t = fresh_var_index(used);

  Literal lower = leq_zero(-LinearTerm::variable(t));                       // 0 <= t
  Literal upper = leq_zero(LinearTerm::variable(t).plus_constant(Rational(-1)));  // t <= 1

  Formula substituted;
  if (std::holds_alternative<CnfFormula>(f)) {
    CnfFormula out;
    for (const Clause& clause : std::get<CnfFormula>(f).clauses) {
      Clause mapped;
      for (const Literal& lit : clause.literals)
        mapped.literals.push_back(substitute_segment(lit, p, q, t));
      out.clauses.push_back(std::move(mapped));
    }
    out.clauses.push_back(Clause{{lower}});
    out.clauses.push_back(Clause{{upper}});
    substituted = std::move(out);
  } else {
    DnfFormula out;
    for (const DnfCell& cell : std::get<DnfFormula>(f).cells) {
      DnfCell mapped;
      for (const Literal& lit : cell.literals)
        mapped.literals.push_back(substitute_segment(lit, p, q, t));
      mapped.literals.push_back(lower);
      mapped.literals.push_back(upper);
      out.cells.push_back(std::move(mapped));
    }
    substituted = std::move(out);
  }

  SegmentProfile profile;
  profile.inside = decompose_unary(substituted).pieces;
  profile.outside = complement_within(profile.inside, Rational(0), Rational(1));
  return profile;
}

std::vector<Polyhedron> closure_dnf(const DnfFormula& f) {
  std::vector<Polyhedron> out;
  for (const DnfCell& cell : f.cells) {
    Polyhedron base;
    std::vector<LinearTerm> exclusions;
    for (const Literal& lit : cell.literals) {
      switch (lit.rel) {
        case Rel::LeqZero: base.weak.push_back(lit.term); break;
        case Rel::LtZero: base.strict.push_back(lit.term); break;
        case Rel::EqZero:
          base.weak.push_back(lit.term);
          base.weak.push_back(-lit.term);
          break;
        case Rel::NeqZero: exclusions.push_back(lit.term); break;
      }
    }
    std::function<void(std::size_t)> expand = [&](std::size_t i) {
      if (i == exclusions.size()) {
        if (!lp_feasible(base)) return;  // closure of an empty cell stays empty
        Polyhedron weakened;
        weakened.weak = base.weak;
        weakened.weak.insert(weakened.weak.end(), base.strict.begin(), base.strict.end());
        out.push_back(std::move(weakened));
        return;
      }
      for (int side = 0; side < 2; ++side) {
        base.strict.push_back(side == 0 ? exclusions[i] : -exclusions[i]);
        expand(i + 1);
        base.strict.pop_back();
      }
    };
    expand(0);
  }
  return out;
}

namespace {

// Equalities folded into weak rows; strict rows are refused.
Polyhedron normalized_weak(const Polyhedron& p) {
  if (!p.strict.empty())
    throw StrictNotSupportedError("operation requires closed (weak-only) polyhedra");
  Polyhedron out;
  out.weak = p.weak;
  for (const LinearTerm& t : p.equalities) {
    out.weak.push_back(t);
    out.weak.push_back(-t);
  }
  return out;
}

bool row_valid_on(const LinearTerm& row, const Polyhedron& p) {
  LpOutcome res = lp_optimize(row, p);
  if (std::holds_alternative<LpUnbounded>(res)) return false;
  return std::get<LpOptimum>(res).value.sign() <= 0;
}

}  // namespace

Polyhedron envelope(const std::vector<Polyhedron>& ps) {
  if (ps.empty()) throw EmptyInputError("envelope of an empty family");
  std::vector<Polyhedron> members;
  for (const Polyhedron& p : ps) {
    Polyhedron w = normalized_weak(p);
    if (!lp_feasible(w)) throw EmptyInputError("envelope member is empty");
    members.push_back(std::move(w));
  }
  Polyhedron env;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (const LinearTerm& row : members[i].weak) {
      bool valid = true;
      for (std::size_t j = 0; j < members.size() && valid; ++j)
        if (j != i) valid = row_valid_on(row, members[j]);
      if (valid &&
          std::find(env.weak.begin(), env.weak.end(), row) == env.weak.end())
        env.weak.push_back(row);
    }
  }
  return env;
}

ConvexUnionResult is_convex_union(const std::vector<Polyhedron>& ps, const Limits& limits) {
  Polyhedron env = envelope(ps);
  std::vector<Polyhedron> members;
  for (const Polyhedron& p : ps) members.push_back(normalized_weak(p));

  std::set<VarId> vars = vars_of(env);
  for (const Polyhedron& p : members) {
    std::set<VarId> pv = vars_of(p);
    vars.insert(pv.begin(), pv.end());
  }

  long long combos = 1;
  for (const Polyhedron& p : members) {
    if (p.weak.empty()) return {true, std::nullopt};  // member covers everything
    combos *= static_cast<long long>(p.weak.size());
    if (combos > limits.dnf_cells)
      throw SizeLimitError("is_convex_union: combination budget exceeded");
  }

  std::vector<std::size_t> choice(members.size(), 0);
  for (;;) {
    Polyhedron test;
    test.weak = env.weak;
    for (std::size_t i = 0; i < members.size(); ++i)
      test.strict.push_back(-members[i].weak[choice[i]]);  // chosen row violated
    if (std::optional<Point> pt = lp_feasible(test)) {
      Point full = complete_point(*pt, vars);
      bool ok = contains_point(env, full);
      for (const Polyhedron& p : members) ok = ok && !contains_point(p, full);
      if (!ok) throw InternalError("convex-union counterexample failed re-verification");
      return {false, full};
    }
    std::size_t i = members.size();
    bool rolled = false;
    while (i > 0) {
      --i;
      if (++choice[i] < members[i].weak.size()) {
        rolled = true;
        break;
      }
      choice[i] = 0;
    }
    if (!rolled) return {true, std::nullopt};
  }
}

namespace {

CnfFormula false_formula() {
  return CnfFormula{{Clause{{leq_zero(LinearTerm(Rational(1)))}}}};
}

// In-piece sample biased toward the hi end.
Rational sample_near_hi(const Piece& p) {
  if (p.hi_closed) return *p.hi;
  Rational left = p.lo ? *p.lo : *p.hi - Rational(2);
  return (left + *p.hi) / Rational(2);
}

Rational sample_near_lo(const Piece& p) {
  if (p.lo_closed) return *p.lo;
  Rational right = p.hi ? *p.hi : *p.lo + Rational(2);
  return (*p.lo + right) / Rational(2);
}

// Longest finite outside piece with positive length; ties keep the first.
std::optional<Piece> widest_gap(const std::vector<Piece>& outside) {
  std::optional<Piece> best;
  for (const Piece& p : outside) {
    if (!p.bounded() || p.length().sign() <= 0) continue;
    if (!best || p.length() > best->length()) best = p;
  }
  return best;
}

HornDlrFormula checked_certificate(const CnfFormula& cert, const CnfFormula& input,
                                   const Limits& limits) {
  auto recognized = recognize_horn_dlr(cert);
  if (!std::holds_alternative<HornDlrFormula>(recognized))
    throw InternalError("certificate is not Horn");
  if (!equivalent(Formula{cert}, Formula{input}, limits).equal)
    throw InternalError("certificate is not equivalent to the input");
  return std::get<HornDlrFormula>(recognized);
}

NotEssentiallyConvex checked_witness(const Formula& f, const Point& p, const Point& q,
                                     const Piece& excluded) {
  if (!eval_formula(f, p) || !eval_formula(f, q))
    throw InternalError("witness endpoints left the set");
  SegmentProfile profile = segment_profile(f, p, q);
  for (const Piece& gap : profile.outside)
    if (gap == excluded) return NotEssentiallyConvex{p, q, excluded};
  throw InternalError("stated excluded interval is not an outside piece");
}

ConvexityVerdict decide_unary(const CnfFormula& f, const Limits& limits) {
  std::set<VarId> vars = free_vars(f);
  if (vars.empty()) {
    bool truth = eval_formula(f, Point{});
    CnfFormula cert = truth ? CnfFormula{} : false_formula();
    return EssentiallyConvex{checked_certificate(cert, f, limits)};
  }
  VarId x = *vars.begin();
  UnaryDecomposition dec = decompose_unary(Formula{f});

  for (std::size_t i = 0; i + 1 < dec.pieces.size(); ++i) {
    const Piece& left = dec.pieces[i];
    const Piece& right = dec.pieces[i + 1];
    if (*left.hi == *right.lo) continue;  // single missing point is allowed
    Point p, q;
    p.set(x, sample_near_hi(left));
    q.set(x, sample_near_lo(right));
    SegmentProfile profile = segment_profile(Formula{f}, p, q);
    std::optional<Piece> gap = widest_gap(profile.outside);
    if (!gap) throw InternalError("positive gap vanished under profiling");
    return checked_witness(Formula{f}, p, q, *gap);
  }

  // Essentially convex: the set is its hull minus finitely many points.
  CnfFormula cert;
  if (dec.pieces.empty()) {
    cert = false_formula();
  } else {
    const Piece& first = dec.pieces.front();
    const Piece& last = dec.pieces.back();
    LinearTerm xt = LinearTerm::variable(x);
    if (first.lo) {
      cert.clauses.push_back(Clause{{leq_zero(LinearTerm(*first.lo) - xt)}});
      if (!first.lo_closed)
        cert.clauses.push_back(Clause{{neq_zero(xt.plus_constant(-*first.lo))}});
    }
    if (last.hi) {
      cert.clauses.push_back(Clause{{leq_zero(xt.plus_constant(-*last.hi))}});
      if (!last.hi_closed)
        cert.clauses.push_back(Clause{{neq_zero(xt.plus_constant(-*last.hi))}});
    }
    for (std::size_t i = 0; i + 1 < dec.pieces.size(); ++i)
      cert.clauses.push_back(
          Clause{{neq_zero(xt.plus_constant(-*dec.pieces[i].hi))}});
  }
  return EssentiallyConvex{checked_certificate(cert, f, limits)};
}

// A point well inside the cell when it has interior, else any cell point.
std::optional<Point> cell_sample(const DnfCell& cell, const Formula& f,
                                 const std::set<VarId>& vars) {
  Polyhedron base = cell_relaxation(cell);
  std::set<VarId> used = vars_of(base);
  used.insert(vars.begin(), vars.end());
  VarId eps = fresh_var_index(used);
  LinearTerm eps_term = LinearTerm::variable(eps);
  Polyhedron lifted;
  for (const LinearTerm& t : base.weak) lifted.weak.push_back(t + eps_term);
  for (const LinearTerm& t : base.strict) lifted.weak.push_back(t + eps_term);
  lifted.weak.push_back(eps_term.plus_constant(Rational(-1)));
  lifted.equalities = base.equalities;

  LpOutcome res = lp_optimize(eps_term, lifted);
  if (const auto* opt = std::get_if<LpOptimum>(&res); opt && opt->value.sign() > 0) {
    Point pt = opt->witness;
    pt.values.erase(eps);
    Point full = complete_point(pt, vars);
    if (eval_formula(f, full)) return full;
  }
  if (std::optional<Point> pt = cell_feasible(cell)) {
    Point full = complete_point(*pt, vars);
    if (eval_formula(f, full)) return full;
  }
  return std::nullopt;
}

}  // namespace

ConvexityVerdict essential_convexity_check(const CnfFormula& f, const Limits& limits,
                                           unsigned seed) {
  StandardDefinition sd = standard_definition(f, limits);
  if (std::holds_alternative<HornDlrFormula>(recognize_horn_dlr(sd.cnf)))
    return EssentiallyConvex{checked_certificate(sd.cnf, f, limits)};

  std::set<VarId> vars = free_vars(f);
  if (vars.size() <= 1) return decide_unary(f, limits);

  const Formula formula{f};
  DnfFormula dnf = to_dnf(f, limits);
  if (dnf.cells.empty())
    return EssentiallyConvex{checked_certificate(false_formula(), f, limits)};

  std::vector<Point> candidates;
  auto add_candidate = [&](const Point& pt) {
    Point full = complete_point(pt, vars);
    if (!eval_formula(formula, full)) return;
    if (std::find(candidates.begin(), candidates.end(), full) == candidates.end())
      candidates.push_back(full);
  };

  for (const DnfCell& cell : dnf.cells)
    if (std::optional<Point> pt = cell_sample(cell, formula, vars)) add_candidate(*pt);

  // Bounding box comfortably containing every bounded feature of the input.
  Rational max_coeff(0), max_const(0);
  std::vector<LinearTerm> hyperplanes;
  for (const Literal* lit : literals_of(formula)) {
    if (lit->term.is_constant()) continue;
    if (std::find(hyperplanes.begin(), hyperplanes.end(), lit->term) == hyperplanes.end())
      hyperplanes.push_back(lit->term);
    max_const = max(max_const, lit->term.constant().abs());
    for (const auto& [v, c] : lit->term.coefficients()) max_coeff = max(max_coeff, c.abs());
  }
  Rational box_m = Rational(1) + Rational(static_cast<long long>(vars.size())) *
                                     (Rational(1) + max_const) * (Rational(1) + max_coeff);
  std::vector<LinearTerm> box;
  for (VarId v : vars) {
    box.push_back(LinearTerm::variable(v).plus_constant(-box_m));    // v <= M
    box.push_back((-LinearTerm::variable(v)).plus_constant(-box_m));  // -v <= M
  }

  for (std::size_t i = 0; i < hyperplanes.size(); ++i) {
    for (std::size_t j = i + 1; j < hyperplanes.size(); ++j) {
      Polyhedron cut;
      cut.weak = box;
      cut.equalities = {hyperplanes[i], hyperplanes[j]};
      if (std::optional<Point> pt = lp_feasible(cut)) add_candidate(*pt);
    }
  }

  for (const DnfCell& cell : dnf.cells) {
    std::vector<LinearTerm> rows;
    for (const Literal& lit : cell.literals)
      if (lit.rel != Rel::NeqZero &&
          std::find(rows.begin(), rows.end(), lit.term) == rows.end())
        rows.push_back(lit.term);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = i + 1; j < rows.size(); ++j) {
        Polyhedron vertex;
        vertex.weak = box;
        vertex.weak.insert(vertex.weak.end(), rows.begin(), rows.end());
        vertex.equalities = {rows[i], rows[j]};
        if (std::optional<Point> pt = lp_feasible(vertex)) add_candidate(*pt);
      }
    }
  }

  // Extreme points of each (closed, box-clipped) cell spread the candidates
  // far apart; unbounded members otherwise contribute only one local sample.
  // A strict or excluded face can invalidate the extreme itself, so its
  // midpoint with an interior sample of the same cell is offered as well.
  for (const DnfCell& cell : dnf.cells) {
    Polyhedron clipped = cell_relaxation(cell);
    clipped.weak.insert(clipped.weak.end(), clipped.strict.begin(), clipped.strict.end());
    clipped.strict.clear();
    clipped.weak.insert(clipped.weak.end(), box.begin(), box.end());
    std::optional<Point> inner = cell_sample(cell, formula, vars);
    std::vector<LinearTerm> objectives;
    for (VarId v : vars) {
      objectives.push_back(LinearTerm::variable(v));
      objectives.push_back(-LinearTerm::variable(v));
    }
    LinearTerm diagonal;
    for (VarId v : vars) diagonal.set_coefficient(v, Rational(1));
    objectives.push_back(diagonal);
    objectives.push_back(-diagonal);
    for (const LinearTerm& objective : objectives) {
      LpOutcome res = lp_optimize(objective, clipped);
      if (!std::holds_alternative<LpOptimum>(res)) continue;
      Point extreme = complete_point(std::get<LpOptimum>(res).witness, vars);
      add_candidate(extreme);
      if (inner && extreme != *inner) {
        Point mix;
        for (VarId v : vars) mix.set(v, (extreme.at(v) + inner->at(v)) / Rational(2));
        add_candidate(mix);
      }
    }
  }

  // A few seeded convex combinations widen the net without breaking
  // determinism for a fixed seed.
  if (candidates.size() >= 2) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    std::uniform_int_distribution<int> weight(1, 7);
    for (int k = 0; k < 16; ++k) {
      const Point& a = candidates[pick(rng)];
      const Point& b = candidates[pick(rng)];
      Rational wa(weight(rng)), wb(weight(rng));
      Point mix;
      for (VarId v : vars) mix.set(v, (wa * a.at(v) + wb * b.at(v)) / (wa + wb));
      add_candidate(mix);
    }
  }

  std::size_t pairs = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      if (candidates[i] == candidates[j]) continue;
      ++pairs;
      SegmentProfile profile = segment_profile(formula, candidates[i], candidates[j]);
      if (std::optional<Piece> gap = widest_gap(profile.outside))
        return checked_witness(formula, candidates[i], candidates[j], *gap);
    }
  }

  return ConvexityUnknown{"no excluded interval among " + std::to_string(candidates.size()) +
                          " candidate points (" + std::to_string(pairs) +
                          " segment profiles)"};
}

}  // namespace dlrkit
