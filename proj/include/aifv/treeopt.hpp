#pragma once

#include <vector>

#include "aifv/codec.hpp"
#include "aifv/codetree.hpp"
#include "aifv/dist.hpp"

namespace aifv {

/// Enumeration caps. best_tree scans every reduced shape, which is viable up
/// to kMaxEnumerationSymbols; exhaustive_optimum additionally scans every
/// assignment of both trees and is capped lower.
inline constexpr int kMaxEnumerationSymbols = 8;
inline constexpr int kMaxOracleSymbols = 5;

/// An assignable position in a shape: a leaf or master node.
struct Slot {
  int node;
  int depth;
  bool is_master;
};

/// A code-tree skeleton with node kinds but no symbols. The slot orders are
/// the ascending-slot-cost permutations used for assignment: slot cost is
/// depth + x*[master] for T0 and depth - x*[leaf] for T1, and the ordering of
/// slots by that cost is the same for every x inside (0,1); only x = 1 (and
/// the leaf-before-master tie rule) needs a second table.
struct TreeShape {
  CodeTree skeleton;
  std::vector<Slot> slots;
  std::vector<int> slot_order_interior;  // valid for x in [0,1)
  std::vector<int> slot_order_at_one;    // valid for x = 1
};

/// All reduced shapes of the given kind with exactly n slots, in a fixed
/// canonical order, each one passing validate() once symbols are assigned.
/// The returned reference is to a process-lifetime cache.
const std::vector<TreeShape>& enumerate_shapes(int n, TreeKind kind);

/// Fills a shape's slots: symbol_of_slot[i] is the sorted symbol index placed
/// on shape.slots[i].
CodeTree assign_symbols(const TreeShape& shape, const std::vector<int>& symbol_of_slot);

struct BestTreeResult {
  CodeTree tree;
  Rational value;  // min over trees of L + x*q1 (T0) or L - x*q0 (T1)
  TreeMetrics metrics;
};

/// Exact minimizer of f_T0(x) = L + x*q1 (kind T0) or g_T1(x) = L - x*q0
/// (kind T1) over all reduced trees, for x in [0,1]. Per shape the largest
/// probabilities go to the cheapest slots; ties across trees prefer smaller
/// q1 (T0) / larger q0 (T1), then the lexicographically smallest
/// serialization.
BestTreeResult best_tree(const Rational& x, const SourceDist& dist, TreeKind kind);

struct ExhaustiveResult {
  CodePair pair;
  Rational cost;
};

/// Reference oracle: globally minimal stationary cost over every
/// (shape, assignment) product for both trees, including the degenerate
/// q1(T0) = 0 branch. Exact; capped at kMaxOracleSymbols.
ExhaustiveResult exhaustive_optimum(const SourceDist& dist);

}  // namespace aifv
