#include "dlrkit/core.hpp"

namespace dlrkit {

VarId VarPool::var(const std::string& name) {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) return it->second;
  VarId id{static_cast<std::uint32_t>(names_.size())};
  names_.push_back(name);
  by_name_.emplace(name, id);
  return id;
}

VarId VarPool::fresh(const std::string& hint) {
  if (!contains(hint)) return var(hint);
  for (std::size_t k = next_suffix_[hint] + 1;; ++k) {
    std::string candidate = hint + std::to_string(k);
    if (!contains(candidate)) {
      next_suffix_[hint] = k;
      return var(candidate);
    }
  }
}

const std::string& VarPool::name(VarId v) const {
  if (v.index >= names_.size()) throw Error("variable id outside pool");
  return names_[v.index];
}

LinearTerm LinearTerm::operator+(const LinearTerm& o) const {
  LinearTerm out = *this;
  out.constant_ += o.constant_;
  for (const auto& [v, c] : o.coeffs_) out.set_coefficient(v, out.coefficient(v) + c);
  return out;
}

LinearTerm LinearTerm::operator-(const LinearTerm& o) const {
  LinearTerm out = *this;
  out.constant_ -= o.constant_;
  for (const auto& [v, c] : o.coeffs_) out.set_coefficient(v, out.coefficient(v) - c);
  return out;
}

LinearTerm LinearTerm::scaled(const Rational& k) const {
  LinearTerm out;
  if (k.is_zero()) return out;
  out.constant_ = constant_ * k;
  for (const auto& [v, c] : coeffs_) out.coeffs_.emplace(v, c * k);
  return out;
}

LinearTerm LinearTerm::plus_constant(const Rational& k) const {
  LinearTerm out = *this;
  out.constant_ += k;
  return out;
}

LinearTerm LinearTerm::substituted(VarId v, const LinearTerm& replacement) const {
  auto it = coeffs_.find(v);
  if (it == coeffs_.end()) return *this;
  Rational a = it->second;
  LinearTerm out = without(v);
  return out + replacement.scaled(a);
}

LinearTerm LinearTerm::without(VarId v) const {
  LinearTerm out = *this;
  out.coeffs_.erase(v);
  return out;
}

bool operator<(const LinearTerm& a, const LinearTerm& b) {
  if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
  return std::lexicographical_compare(
      a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(), b.coeffs_.end(),
      [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
      });
}

const Rational& Point::at(VarId v) const {
  auto it = values.find(v);
  if (it == values.end())
    throw MissingVariableError("point does not assign variable #" + std::to_string(v.index));
  return it->second;
}

Rational eval_term(const LinearTerm& t, const Point& x) {
  Rational acc = t.constant();
  for (const auto& [v, c] : t.coefficients()) acc += c * x.at(v);
  return acc;
}

bool eval_literal(const Literal& lit, const Point& x) {
  Rational v = eval_term(lit.term, x);
  switch (lit.rel) {
    case Rel::LeqZero: return v.sign() <= 0;
    case Rel::LtZero: return v.sign() < 0;
    case Rel::EqZero: return v.is_zero();
    case Rel::NeqZero: return !v.is_zero();
  }
  throw InternalError("unknown relation");
}

bool eval_formula(const CnfFormula& f, const Point& x) {
  for (const Clause& c : f.clauses) {
    bool sat = false;
    for (const Literal& lit : c.literals)
      if (eval_literal(lit, x)) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

bool eval_formula(const DnfFormula& f, const Point& x) {
  for (const DnfCell& cell : f.cells) {
    bool sat = true;
    for (const Literal& lit : cell.literals)
      if (!eval_literal(lit, x)) {
        sat = false;
        break;
      }
    if (sat) return true;
  }
  return false;
}

bool eval_formula(const Formula& f, const Point& x) {
  return std::visit([&](const auto& g) { return eval_formula(g, x); }, f);
}

std::set<VarId> free_vars(const LinearTerm& t) {
  std::set<VarId> out;
  for (const auto& [v, c] : t.coefficients()) out.insert(v);
  return out;
}

namespace {
template <typename F>
std::set<VarId> vars_of_literals(const F& f) {
  std::set<VarId> out;
  for (const Literal* lit : literals_of(f))
    for (const auto& [v, c] : lit->term.coefficients()) out.insert(v);
  return out;
}
}  // namespace

std::set<VarId> free_vars(const CnfFormula& f) { return vars_of_literals(f); }
std::set<VarId> free_vars(const DnfFormula& f) { return vars_of_literals(f); }
std::set<VarId> free_vars(const Formula& f) {
  return std::visit([](const auto& g) { return free_vars(g); }, f);
}

std::vector<const Literal*> literals_of(const CnfFormula& f) {
  std::vector<const Literal*> out;
  for (const Clause& c : f.clauses)
    for (const Literal& lit : c.literals) out.push_back(&lit);
  return out;
}

std::vector<const Literal*> literals_of(const DnfFormula& f) {
  std::vector<const Literal*> out;
  for (const DnfCell& c : f.cells)
    for (const Literal& lit : c.literals) out.push_back(&lit);
  return out;
}

std::vector<const Literal*> literals_of(const Formula& f) {
  return std::visit([](const auto& g) { return literals_of(g); }, f);
}

Point complete_point(Point x, const std::set<VarId>& vars) {
  for (VarId v : vars)
    if (!x.has(v)) x.set(v, Rational(0));
  return x;
}

}  // namespace dlrkit
