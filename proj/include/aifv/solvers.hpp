#pragma once

#include <optional>
#include <string>

#include "aifv/geometry.hpp"

namespace aifv {

enum class Method { BinarySearch, Ellipsoid, Iterative, Exhaustive };
const char* to_string(Method m);
std::optional<Method> method_from_string(const std::string& name);

struct SolveReport {
  CodePair pair;
  std::optional<Rational> x_star;  // crossing parameter; absent for exhaustive
  Rational cost;                   // stationary cost of `pair`
  Method method;
  long iterations = 0;
  long oracle_calls = 0;  // separation-oracle calls (ellipsoid only)
  bool degenerate = false;  // q1(T0) = 0: the code collapses to Huffman
};

/// eps0 = 2^-2(b+1): the halving target and the envelope breakpoint spacing.
Rational epsilon0(long b);
/// eps1 = 2^-(b+1) * eps0 = 2^-3(b+1): the ellipsoid objective tolerance.
Rational epsilon1(long b);

/// Halves [0,1] exactly 2(b+1) times keeping E0(l) <= E1(l) <= ... <= E1(r),
/// then intersects the four witness lines exactly.
SolveReport solve_binary_search(const SourceDist& dist);

/// The classical fixed-point iteration: trees at C, then C moves to the
/// intersection of their cost lines, until C repeats exactly. The default
/// start is 2 - log2(3) rounded to a multiple of 2^-2(b+2).
SolveReport solve_iterative(const SourceDist& dist,
                            std::optional<Rational> start = std::nullopt,
                            long iteration_cap = 1'000'000);

struct EllipsoidOptions {
  std::optional<long> precision_bits;  // phase-1 mantissa override
};

/// Phase 1: central-cut ellipsoid maximizing x2 over K from the ball
/// B(0,4n), with exact oracle queries at the (rationalized) centers, until
/// the best feasible point is certified within eps1 of the optimum or the
/// theorem's call budget runs out. Phase 2: exact envelope argmax over
/// [x1 +- eps0/2], all in rational arithmetic.
SolveReport solve_ellipsoid(const SourceDist& dist, const EllipsoidOptions& opts = {});

/// Wraps the brute-force oracle in a report.
SolveReport solve_exhaustive(const SourceDist& dist);

SolveReport solve(const SourceDist& dist, Method method);

/// Separation-oracle call budget: 3m(log(1/eps) + 2m log(2R) + m log(1/eps1))
/// with m = 2, R = 4n, eps = 1/2, logs base 2, rounded down.
long ellipsoid_call_budget(int n, long b);

/// Phase-1 mantissa: 6(b+1) + ceil(log2 n) + 64 bits.
long default_ellipsoid_precision(int n, long b);

/// Deterministic plain-text report: parameters, costs (exact and decimal),
/// baselines, counters, and both trees inline.
std::string render_report(const SolveReport& report, const SourceDist& dist);

}  // namespace aifv
