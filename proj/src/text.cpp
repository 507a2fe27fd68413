#include "dlrkit/text.hpp"

#include <cctype>
#include <sstream>

#include "dlrkit/qe.hpp"

namespace dlrkit {

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  bool eof() {
    skip_space();
    return pos >= text.size();
  }

  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& expected) {
    skip_space();
    throw SyntaxError(line, col, expected);
  }

  bool accept(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }

  // Two-character relations need one lookahead.
  bool accept_str(std::string_view s) {
    skip_space();
    if (text.substr(pos, s.size()) != s) return false;
    for (std::size_t i = 0; i < s.size(); ++i) advance();
    return true;
  }

  void expect(char c, const std::string& what) {
    if (!accept(c)) fail(what);
  }

  bool digit_ahead() {
    return std::isdigit(static_cast<unsigned char>(peek())) != 0;
  }

  bool ident_ahead() {
    char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  BigInt read_digits() {
    skip_space();
    if (!digit_ahead()) fail("digits");
    BigInt out = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      out = out * 10 + (text[pos] - '0');
      advance();
    }
    return out;
  }

  std::string read_ident() {
    skip_space();
    if (!ident_ahead()) fail("identifier");
    std::string out;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
        out.push_back(c);
        advance();
      } else {
        break;
      }
    }
    return out;
  }
};

struct FormulaParser {
  Lexer lex;
  VarPool& pool;

  // coeff := ['-'] digits ['/' posint]
  Rational coeff(bool negative) {
    if (lex.accept('-')) negative = !negative;
    BigInt num = lex.read_digits();
    BigInt den = 1;
    if (lex.accept('/')) {
      den = lex.read_digits();
      if (den.is_zero()) lex.fail("positive denominator");
    }
    if (negative) num = -num;
    return Rational(num, den);
  }

  // monomial := coeff '*' ident | coeff | ident
  void monomial(LinearTerm& term, bool negative) {
    if (lex.digit_ahead() || lex.peek() == '-') {
      Rational c = coeff(negative);
      if (lex.accept('*')) {
        VarId v = pool.var(lex.read_ident());
        term.set_coefficient(v, term.coefficient(v) + c);
      } else {
        term.set_constant(term.constant() + c);
      }
      return;
    }
    if (lex.ident_ahead()) {
      VarId v = pool.var(lex.read_ident());
      Rational c = negative ? Rational(-1) : Rational(1);
      term.set_coefficient(v, term.coefficient(v) + c);
      return;
    }
    lex.fail("monomial");
  }

  LinearTerm term() {
    LinearTerm out;
    bool lead_negative = lex.accept('-');
    monomial(out, lead_negative);
    for (;;) {
      if (lex.accept('+')) {
        monomial(out, false);
      } else if (lex.accept('-')) {
        monomial(out, true);
      } else {
        break;
      }
    }
    return out;
  }

  Literal literal() {
    LinearTerm t = term();
    Rel rel;
    if (lex.accept_str("<=")) {
      rel = Rel::LeqZero;
    } else if (lex.accept_str("!=")) {
      rel = Rel::NeqZero;
    } else if (lex.accept('<')) {
      rel = Rel::LtZero;
    } else if (lex.accept('=')) {
      rel = Rel::EqZero;
    } else {
      lex.fail("relation (<=, <, =, !=)");
    }
    BigInt rhs = lex.read_digits();
    if (!rhs.is_zero()) lex.fail("0 on the right-hand side");
    return Literal{t, rel};
  }

  Clause clause() {
    lex.expect('(', "'('");
    Clause out;
    out.literals.push_back(literal());
    while (lex.accept('|')) out.literals.push_back(literal());
    lex.expect(')', "')'");
    return out;
  }

  CnfFormula formula() {
    CnfFormula out;
    if (lex.eof()) return out;
    out.clauses.push_back(clause());
    while (lex.accept('&')) out.clauses.push_back(clause());
    if (!lex.eof()) lex.fail("'&' or end of input");
    return out;
  }
};

}  // namespace

CnfFormula parse_formula(std::string_view text, VarPool& pool) {
  FormulaParser parser{Lexer{text}, pool};
  return parser.formula();
}

LinearTerm parse_term(std::string_view text, VarPool& pool) {
  FormulaParser parser{Lexer{text}, pool};
  LinearTerm out = parser.term();
  if (!parser.lex.eof()) parser.lex.fail("end of term");
  return out;
}

Rational parse_rational_text(std::string_view text) {
  std::optional<Rational> r = Rational::parse(text);
  if (!r) throw SyntaxError(1, 1, "rational (num or num/den)");
  return *r;
}

Point parse_point(std::string_view text, VarPool& pool) {
  Point out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() &&
           (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
      ++i;
  };
  skip();
  while (i < text.size()) {
    std::size_t eq = text.find('=', i);
    if (eq == std::string_view::npos) throw SyntaxError(1, static_cast<int>(i + 1), "name=value");
    std::string name(text.substr(i, eq - i));
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    std::size_t end = eq + 1;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) &&
           text[end] != ',')
      ++end;
    out.set(pool.var(name), parse_rational_text(text.substr(eq + 1, end - eq - 1)));
    i = end;
    skip();
  }
  return out;
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

OneInThreeInstance parse_one_in_three(std::string_view text) {
  OneInThreeInstance out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 3) throw SyntaxError(lineno, 1, "three variable names");
    for (const std::string& name : toks)
      if (std::find(out.variables.begin(), out.variables.end(), name) == out.variables.end())
        out.variables.push_back(name);
    out.clauses.push_back({toks[0], toks[1], toks[2]});
  }
  return out;
}

CspInstance parse_csp(std::string_view text, VarPool& pool) {
  CspInstance out;
  std::set<VarId> seen;
  auto note = [&](VarId v) {
    if (seen.insert(v).second) out.variables.push_back(v);
  };
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    if (head == "def") {
      // def NAME param : formula-text
      std::size_t colon = line.find(':');
      if (toks.size() < 3 || colon == std::string::npos)
        throw SyntaxError(lineno, 1, "def NAME param : formula");
      UserRelation rel;
      rel.name = toks[1];
      rel.params.push_back(pool.var(toks[2]));
      rel.definition = parse_formula(std::string_view(line).substr(colon + 1), pool);
      for (VarId v : free_vars(rel.definition))
        if (std::find(rel.params.begin(), rel.params.end(), v) == rel.params.end())
          throw SyntaxError(lineno, 1, "definition over the declared parameter only");
      out.user = std::move(rel);
      continue;
    }
    auto arity = [&](std::size_t n) {
      if (toks.size() != n + 1) throw SyntaxError(lineno, 1, "atom arity " + std::to_string(n));
    };
    CspAtom atom;
    if (head == "plus") {
      arity(3);
      atom.kind = CspAtom::Kind::Plus;
    } else if (head == "one") {
      arity(1);
      atom.kind = CspAtom::Kind::One;
    } else if (head == "leq") {
      arity(2);
      atom.kind = CspAtom::Kind::Leq;
    } else if (head == "rel") {
      if (toks.size() < 3) throw SyntaxError(lineno, 1, "rel NAME v...");
      atom.kind = CspAtom::Kind::Rel;
    } else {
      throw SyntaxError(lineno, 1, "atom (plus/one/leq/rel) or def");
    }
    std::size_t first_arg = atom.kind == CspAtom::Kind::Rel ? 2 : 1;
    for (std::size_t i = first_arg; i < toks.size(); ++i) {
      VarId v = pool.var(toks[i]);
      atom.args.push_back(v);
      note(v);
    }
    out.atoms.push_back(std::move(atom));
  }
  return out;
}

std::string print_term(const LinearTerm& t, const VarPool& pool) {
  std::string out;
  bool first = true;
  auto append = [&](const Rational& c, const std::string* name) {
    Rational value = c;
    if (first) {
      if (value.sign() < 0) {
        out += "-";
        value = -value;
      }
      first = false;
    } else {
      out += value.sign() < 0 ? " - " : " + ";
      if (value.sign() < 0) value = -value;
    }
    if (!name) {
      out += value.str_compact();
      return;
    }
    if (value == Rational(1)) {
      out += *name;
    } else {
      out += value.str_compact() + "*" + *name;
    }
  };
  for (const auto& [v, c] : t.coefficients()) append(c, &pool.name(v));
  if (!t.constant().is_zero() || t.coefficients().empty()) append(t.constant(), nullptr);
  return out;
}

std::string print_literal(const Literal& lit, const VarPool& pool) {
  const char* rel = nullptr;
  switch (lit.rel) {
    case Rel::LeqZero: rel = " <= 0"; break;
    case Rel::LtZero: rel = " < 0"; break;
    case Rel::EqZero: rel = " = 0"; break;
    case Rel::NeqZero: rel = " != 0"; break;
  }
  return print_term(lit.term, pool) + rel;
}

namespace {

std::string print_clause(const Clause& c, const VarPool& pool) {
  if (c.literals.empty()) return "(1 <= 0)";  // empty clause is false
  std::string out = "(";
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " | ";
    out += print_literal(c.literals[i], pool);
  }
  return out + ")";
}

std::string print_cell(const DnfCell& c, const VarPool& pool) {
  if (c.literals.empty()) return "(0 <= 0)";  // empty cell is true
  std::string out = "(";
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " & ";
    out += print_literal(c.literals[i], pool);
  }
  return out + ")";
}

}  // namespace

std::string print_formula(const CnfFormula& f, const VarPool& pool) {
  std::string out;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    if (i) out += " & ";
    out += print_clause(f.clauses[i], pool);
  }
  return out;
}

std::string print_dnf(const DnfFormula& f, const VarPool& pool) {
  if (f.cells.empty()) return "(1 <= 0)";  // empty union is false
  std::string out;
  for (std::size_t i = 0; i < f.cells.size(); ++i) {
    if (i) out += " | ";
    out += print_cell(f.cells[i], pool);
  }
  return out;
}

std::string print_point(const Point& x, const VarPool& pool) {
  std::string out;
  for (const auto& [v, r] : x.values) {
    if (!out.empty()) out += " ";
    out += pool.name(v) + "=" + r.str();
  }
  return out;
}

std::string print_piece(const Piece& p) {
  std::string out = p.lo_closed ? "[" : "(";
  out += p.lo ? p.lo->str() : "-inf";
  out += ",";
  out += p.hi ? p.hi->str() : "+inf";
  out += p.hi_closed ? "]" : ")";
  return out;
}

std::string print_csp(const CspInstance& instance, const VarPool& pool, const Limits& limits) {
  std::string out;
  if (instance.user) {
    const UserRelation& rel = *instance.user;
    CnfFormula def = std::holds_alternative<CnfFormula>(rel.definition)
                         ? std::get<CnfFormula>(rel.definition)
                         : to_cnf(std::get<DnfFormula>(rel.definition), limits);
    out += "def " + rel.name + " " + pool.name(rel.params.at(0)) + " : " +
           print_formula(def, pool) + "\n";
  }
  for (const CspAtom& atom : instance.atoms) {
    switch (atom.kind) {
      case CspAtom::Kind::Plus: out += "plus"; break;
      case CspAtom::Kind::One: out += "one"; break;
      case CspAtom::Kind::Leq: out += "leq"; break;
      case CspAtom::Kind::Rel: out += "rel " + instance.user->name; break;
    }
    for (VarId v : atom.args) out += " " + pool.name(v);
    out += "\n";
  }
  return out;
}

std::string print_pp(const PpFormula& pp, const VarPool& pool) {
  std::string out = "free";
  for (VarId v : pp.free_variables) out += " " + pool.name(v);
  out += "\nexists";
  for (VarId v : pp.existentials) out += " " + pool.name(v);
  out += "\n";
  CspInstance atoms_only;
  atoms_only.atoms = pp.atoms;
  out += print_csp(atoms_only, pool);
  return out;
}

}  // namespace dlrkit
