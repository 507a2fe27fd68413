#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dlrkit/qe.hpp"
#include "dlrkit/solver.hpp"

namespace dlrkit {

/// One maximal interval of the reals: an unbounded side is nullopt, a single
/// point has lo == hi with both ends closed.
struct Piece {
  std::optional<Rational> lo, hi;
  bool lo_closed = false, hi_closed = false;

  bool is_point() const { return lo && hi && *lo == *hi; }
  bool bounded() const { return lo && hi; }
  Rational length() const { return *hi - *lo; }
  bool contains(const Rational& x) const;

  friend bool operator==(const Piece& a, const Piece& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed &&
           a.hi_closed == b.hi_closed;
  }
};

/// Sorts, merges touching/overlapping pieces, drops empty ones.
std::vector<Piece> canonical_pieces(std::vector<Piece> pieces);
/// Complement of a canonical piece list within the closed interval [a, b].
std::vector<Piece> complement_within(const std::vector<Piece>& pieces, const Rational& a,
                                     const Rational& b);
bool pieces_contain(const std::vector<Piece>& pieces, const Rational& x);
bool pieces_intersect_closed(const std::vector<Piece>& pieces, const Rational& a,
                             const Rational& b);

/// Sorted disjoint pieces whose union is the set defined by a one-variable
/// formula.
struct UnaryDecomposition {
  std::vector<Piece> pieces;
};

/// The exact subset of the parameter interval [0,1] on which the segment from
/// p to q lies inside the defined set, and its complement.
struct SegmentProfile {
  std::vector<Piece> inside;
  std::vector<Piece> outside;
};

/// Closure of a union of cells: empty cells are dropped first, then strict
/// rows are weakened. Disequalities are split into their strict sides and
/// equalities into two weak rows before either step.
std::vector<Polyhedron> closure_dnf(const DnfFormula& f);

/// Keeps from each system exactly the rows valid on every other member.
/// Members must be nonempty and free of strict rows.
Polyhedron envelope(const std::vector<Polyhedron>& ps);

struct ConvexUnionResult {
  bool convex = false;
  std::optional<Point> counterexample;  // point of envelope \ union
};

/// Decides env \ union = emptyset exactly by expanding one violated row per
/// member and testing each combination.
ConvexUnionResult is_convex_union(const std::vector<Polyhedron>& ps, const Limits& limits = {});

/// Exact decomposition computed from the roots of all literal terms, testing
/// each root and each gap midpoint by evaluation.
UnaryDecomposition decompose_unary(const Formula& f);

SegmentProfile segment_profile(const Formula& f, const Point& p, const Point& q);

struct EssentiallyConvex {
  HornDlrFormula certificate;
};
struct NotEssentiallyConvex {
  Point p, q;
  Piece excluded;  // parameter interval of the p-q segment lying outside the set
};
struct ConvexityUnknown {
  std::string report;
};
using ConvexityVerdict = std::variant<EssentiallyConvex, NotEssentiallyConvex, ConvexityUnknown>;

/// Decides essential convexity where it can: recognized Horn-DLR inputs (after
/// normalization) are certified convex, one-variable inputs are decided
/// exactly from their decomposition, and otherwise a deterministic candidate
/// search hunts for a witness pair; when the search fails the honest answer
/// is Unknown. The seed only adds extra probe points to the search.
ConvexityVerdict essential_convexity_check(const CnfFormula& f, const Limits& limits = {},
                                           unsigned seed = 0);

}  // namespace dlrkit
