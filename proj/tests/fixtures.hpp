#pragma once

#include <random>
#include <tuple>
#include <vector>

#include "aifv/codec.hpp"
#include "aifv/codetree.hpp"

namespace fixtures {

using aifv::CodePair;
using aifv::CodeTree;
using aifv::NodeKind;
using aifv::Rational;
using aifv::SourceDist;
using aifv::TreeKind;
using aifv::TreeNode;

// (parent, edge, kind, symbol)
using NodeSpec = std::tuple<int, int, NodeKind, int>;

inline CodeTree make_tree(TreeKind kind, int n, const std::vector<NodeSpec>& specs) {
  std::vector<TreeNode> nodes;
  nodes.reserve(specs.size());
  for (const auto& [parent, edge, node_kind, symbol] : specs) {
    TreeNode nd;
    nd.parent = parent;
    nd.edge = edge;
    nd.kind = node_kind;
    nd.symbol = symbol;
    nodes.push_back(nd);
  }
  return CodeTree(kind, n, std::move(nodes));
}

// The four-symbol example code: alphabet {a,b,c,d} as symbols {0,1,2,3}.
// T0: a=0 (leaf), b=10 (master), c=11 (leaf), d=1000 (leaf).
inline CodeTree fig1_t0() {
  return make_tree(TreeKind::T0, 4,
                   {
                       {-1, -1, NodeKind::Complete, -1},
                       {0, 0, NodeKind::Leaf, 0},
                       {0, 1, NodeKind::Complete, -1},
                       {2, 0, NodeKind::Master, 1},
                       {3, 0, NodeKind::Slave, -1},
                       {4, 0, NodeKind::Leaf, 3},
                       {2, 1, NodeKind::Leaf, 2},
                   });
}

// T1: a=01 (leaf), b=10 (leaf), c=11 (master), d=1100 (leaf).
inline CodeTree fig1_t1() {
  return make_tree(TreeKind::T1, 4,
                   {
                       {-1, -1, NodeKind::Complete, -1},
                       {0, 0, NodeKind::Slave, -1},
                       {1, 1, NodeKind::Leaf, 0},
                       {0, 1, NodeKind::Complete, -1},
                       {3, 0, NodeKind::Leaf, 1},
                       {3, 1, NodeKind::Master, 2},
                       {5, 0, NodeKind::Slave, -1},
                       {6, 0, NodeKind::Leaf, 3},
                   });
}

inline CodePair fig1_pair() { return CodePair(fig1_t0(), fig1_t1()); }

// Two leaves "0"/"1": the only reduced two-symbol T0.
inline CodeTree two_leaf_t0() {
  return make_tree(TreeKind::T0, 2,
                   {
                       {-1, -1, NodeKind::Complete, -1},
                       {0, 0, NodeKind::Leaf, 0},
                       {0, 1, NodeKind::Leaf, 1},
                   });
}

// Leaves "01"/"1": the only reduced two-symbol T1. Symbol 1 goes on "01".
inline CodeTree two_leaf_t1() {
  return make_tree(TreeKind::T1, 2,
                   {
                       {-1, -1, NodeKind::Complete, -1},
                       {0, 0, NodeKind::Slave, -1},
                       {1, 1, NodeKind::Leaf, 1},
                       {0, 1, NodeKind::Leaf, 0},
                   });
}

// A uniformly random dyadic distribution: n positive multiples of 2^-b
// summing to one (the realized width may be smaller than b).
inline SourceDist random_dyadic_dist(int n, long b, std::mt19937_64& rng) {
  const long total = 1L << b;
  if (total < n) throw aifv::Error("random_dyadic_dist: need 2^b >= n");
  std::vector<long> cuts{0, total};
  while (static_cast<int>(cuts.size()) < n + 1) {
    const long c = static_cast<long>(rng() % static_cast<unsigned long>(total - 1)) + 1;
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> values;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    values.push_back(Rational(cuts[i + 1] - cuts[i]) * Rational::pow2(-b));
  return aifv::make_dist(values);
}

}  // namespace fixtures
