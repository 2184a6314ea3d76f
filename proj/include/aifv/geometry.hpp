#pragma once

#include <optional>
#include <vector>

#include "aifv/treeopt.hpp"

namespace aifv {

/// A tree's cost as a line in the penalty parameter x: value(x) = intercept +
/// slope*x. Lines from T0 trees (f-lines) have slope q1 in [0,1]; lines from
/// T1 trees (g-lines) have slope -q0 in [-1,0].
struct CostLine {
  Rational intercept;  // L
  Rational slope;      // +q1 or -q0
  CodeTree tree;       // provenance

  Rational at(const Rational& x) const { return intercept + slope * x; }
};

CostLine line_of(const CodeTree& tree, const SourceDist& dist);

struct PlanePoint {
  Rational x1;
  Rational x2;
};

/// E0/E1 evaluated at one x, with the witness trees as supporting lines.
struct EnvelopePoint {
  Rational e0;
  Rational e1;
  CostLine f;  // supporting line of E0 at x
  CostLine g;  // supporting line of E1 at x
};

/// E0(x) = min over T0 trees of f(x), E1(x) = min over T1 trees of g(x),
/// both exact, witnesses per best_tree's tie-breaking. Requires x in [0,1].
EnvelopePoint envelope_at(const Rational& x, const SourceDist& dist);

/// Exact line intersection; nullopt when the slopes are equal.
std::optional<PlanePoint> intersect_lines(const CostLine& a, const CostLine& b);

/// Finds the crossing of min(lines0) and min(lines1) inside [l,r]. The caller
/// guarantees min(lines0)-min(lines1) is <= 0 at l and >= 0 at r and that
/// each min has at most one breakpoint inside the interval (interval width
/// <= 2^-2(b+1)); a missing sign change means an upstream bug and throws.
PlanePoint crossing_in_interval(const Rational& l, const Rational& r,
                                const std::vector<CostLine>& lines0,
                                const std::vector<CostLine>& lines1);

/// Membership test for K = {(x1,x2) : 0 <= x1 <= 1, 0 <= x2 <= min(E0,E1)}.
/// For outside points the returned cut satisfies a^T q > rhs >= a^T z for
/// every z in K.
struct SeparationResult {
  bool inside;
  Rational a1;
  Rational a2;
  Rational rhs;
  std::optional<CostLine> line;  // set when the separator is an envelope line
};

SeparationResult separation_oracle(const PlanePoint& q, const SourceDist& dist);

}  // namespace aifv
