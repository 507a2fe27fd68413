#pragma once

#include <string>
#include <string_view>

#include "dlrkit/geometry.hpp"
#include "dlrkit/reductions.hpp"

namespace dlrkit {

/// Grammar:
///   formula  := clause ('&' clause)*
///   clause   := '(' literal ('|' literal)* ')'
///   literal  := term rel '0'
///   rel      := '<=' | '<' | '=' | '!='
///   term     := signedMonomial (('+'|'-') monomial)*
///   monomial := coeff '*' ident | coeff | ident
///   coeff    := int ['/' posint]
/// Whitespace-only input parses to the empty (always-true) formula.
/// Rejects report line, column and the expected token.
CnfFormula parse_formula(std::string_view text, VarPool& pool);
LinearTerm parse_term(std::string_view text, VarPool& pool);
Rational parse_rational_text(std::string_view text);  // throws SyntaxError

/// "name=num/den" pairs separated by whitespace or commas.
Point parse_point(std::string_view text, VarPool& pool);

/// One clause per line, three whitespace-separated variable names.
OneInThreeInstance parse_one_in_three(std::string_view text);

/// One atom per line ("plus x y z", "one x", "leq x y", "rel R v...") with an
/// optional leading definition line "def R param : <formula>".
CspInstance parse_csp(std::string_view text, VarPool& pool);

std::string print_term(const LinearTerm& t, const VarPool& pool);
std::string print_literal(const Literal& lit, const VarPool& pool);
std::string print_formula(const CnfFormula& f, const VarPool& pool);
std::string print_dnf(const DnfFormula& f, const VarPool& pool);
std::string print_point(const Point& x, const VarPool& pool);
std::string print_piece(const Piece& p);
std::string print_csp(const CspInstance& instance, const VarPool& pool,
                      const Limits& limits = {});
std::string print_pp(const PpFormula& pp, const VarPool& pool);

}  // namespace dlrkit
