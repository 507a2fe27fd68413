#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dlrkit/errors.hpp"
#include "dlrkit/rational.hpp"

namespace dlrkit {

/// Dense ordinal of a variable within one instance. The name <-> index
/// bijection lives in the VarPool that minted the id.
struct VarId {
  std::uint32_t index = 0;
  auto operator<=>(const VarId&) const = default;
};

/// Owns the stable name <-> index bijection for one instance. Interning the
/// same name twice yields the same id.
class VarPool {
 public:
  VarId var(const std::string& name);
  /// Mints a variable whose name does not collide with any existing one,
  /// derived from the given hint ("y", "y1", "y2", ...).
  VarId fresh(const std::string& hint);
  const std::string& name(VarId v) const;
  bool contains(const std::string& name) const { return by_name_.count(name) != 0; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, VarId> by_name_;
  std::map<std::string, std::size_t> next_suffix_;
};

/// Affine function of variables: constant + sum of coeff * var. Zero
/// coefficients are never stored, so structural equality is semantic equality.
class LinearTerm {
 public:
  LinearTerm() = default;
  explicit LinearTerm(const Rational& constant) : constant_(constant) {}

  static LinearTerm variable(VarId v) {
    LinearTerm t;
    t.set_coefficient(v, Rational(1));
    return t;
  }

  const std::map<VarId, Rational>& coefficients() const { return coeffs_; }
  const Rational& constant() const { return constant_; }

  Rational coefficient(VarId v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }
  void set_coefficient(VarId v, const Rational& c) {
    if (c.is_zero())
      coeffs_.erase(v);
    else
      coeffs_[v] = c;
  }
  void set_constant(const Rational& c) { constant_ = c; }

  bool is_constant() const { return coeffs_.empty(); }

  LinearTerm operator+(const LinearTerm& o) const;
  LinearTerm operator-(const LinearTerm& o) const;
  LinearTerm operator-() const { return scaled(Rational(-1)); }
  LinearTerm scaled(const Rational& k) const;
  LinearTerm plus_constant(const Rational& k) const;

  /// Replaces every occurrence of v by the given term.
  LinearTerm substituted(VarId v, const LinearTerm& replacement) const;
  /// The term with the v-monomial dropped.
  LinearTerm without(VarId v) const;

  friend bool operator==(const LinearTerm& a, const LinearTerm& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const LinearTerm& a, const LinearTerm& b) { return !(a == b); }
  /// Deterministic total order (for dedup and canonical iteration).
  friend bool operator<(const LinearTerm& a, const LinearTerm& b);

 private:
  std::map<VarId, Rational> coeffs_;
  Rational constant_;
};

enum class Rel : std::uint8_t { LeqZero, LtZero, EqZero, NeqZero };

/// An atomic constraint "term rel 0"; the surface syntax a rel b is folded
/// into (a - b) rel 0 at construction time.
struct Literal {
  LinearTerm term;
  Rel rel = Rel::LeqZero;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.rel == b.rel && a.term == b.term;
  }
  friend bool operator!=(const Literal& a, const Literal& b) { return !(a == b); }
  friend bool operator<(const Literal& a, const Literal& b) {
    if (a.rel != b.rel) return a.rel < b.rel;
    return a.term < b.term;
  }
};

inline Literal leq_zero(const LinearTerm& t) { return Literal{t, Rel::LeqZero}; }
inline Literal lt_zero(const LinearTerm& t) { return Literal{t, Rel::LtZero}; }
inline Literal eq_zero(const LinearTerm& t) { return Literal{t, Rel::EqZero}; }
inline Literal neq_zero(const LinearTerm& t) { return Literal{t, Rel::NeqZero}; }

/// Disjunction of literals. Empty clause is false.
struct Clause {
  std::vector<Literal> literals;
  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Conjunction of clauses. Empty formula is true.
struct CnfFormula {
  std::vector<Clause> clauses;
  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// Conjunction of literals. Empty cell is true.
struct DnfCell {
  std::vector<Literal> literals;
  friend bool operator==(const DnfCell&, const DnfCell&) = default;
};

/// Disjunction of cells. Empty formula is false.
struct DnfFormula {
  std::vector<DnfCell> cells;
  friend bool operator==(const DnfFormula&, const DnfFormula&) = default;
};

/// Matrix of either normal form under a purely existential prefix.
struct QuantifiedFormula {
  std::vector<VarId> prefix;  // innermost quantifier last
  std::variant<CnfFormula, DnfFormula> matrix;
};

/// A rational assignment; must be total on the free variables of whatever it
/// is evaluated against.
struct Point {
  std::map<VarId, Rational> values;

  const Rational& at(VarId v) const;
  bool has(VarId v) const { return values.count(v) != 0; }
  void set(VarId v, const Rational& r) { values[v] = r; }

  friend bool operator==(const Point& a, const Point& b) { return a.values == b.values; }
  friend bool operator<(const Point& a, const Point& b) { return a.values < b.values; }
};

using Formula = std::variant<CnfFormula, DnfFormula>;

Rational eval_term(const LinearTerm& t, const Point& x);
bool eval_literal(const Literal& lit, const Point& x);
bool eval_formula(const CnfFormula& f, const Point& x);
bool eval_formula(const DnfFormula& f, const Point& x);
bool eval_formula(const Formula& f, const Point& x);

std::set<VarId> free_vars(const LinearTerm& t);
std::set<VarId> free_vars(const CnfFormula& f);
std::set<VarId> free_vars(const DnfFormula& f);
std::set<VarId> free_vars(const Formula& f);

std::vector<const Literal*> literals_of(const CnfFormula& f);
std::vector<const Literal*> literals_of(const DnfFormula& f);
std::vector<const Literal*> literals_of(const Formula& f);

/// Fills in zero for every listed variable the point does not assign.
Point complete_point(Point x, const std::set<VarId>& vars);

}  // namespace dlrkit
