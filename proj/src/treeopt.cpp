#include "aifv/treeopt.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>

#include "aifv/error.hpp"

namespace aifv {

namespace {

// A shape in flat form: node kinds in preorder. Arity is implied by the kind
// (complete = 2, master/slave = 1, leaf = 0), so the vector reconstructs the
// tree unambiguously.
using Structure = std::vector<NodeKind>;

// All subtree structures with exactly k slots whose root is a leaf, a master
// (with its mandatory slave + grandchild spine), or a complete node. Slaves
// never appear outside that spine: hanging a slave anywhere else lengthens
// codewords without changing any q, so no such tree can matter to the
// optimization.
const std::vector<Structure>& subtree_structures(int k) {
  static std::mutex mu;
  static std::vector<std::vector<Structure>> memo;  // memo[k]
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(memo.size()) > k && !memo[k].empty()) return memo[k];
  if (static_cast<int>(memo.size()) <= k) memo.resize(k + 1);

  for (int m = 1; m <= k; ++m) {
    if (!memo[m].empty()) continue;
    std::vector<Structure> out;
    if (m == 1) {
      out.push_back({NodeKind::Leaf});
    } else {
      for (const Structure& g : memo[m - 1]) {
        Structure s{NodeKind::Master, NodeKind::Slave};
        s.insert(s.end(), g.begin(), g.end());
        out.push_back(std::move(s));
      }
      for (int a = 1; a < m; ++a) {
        for (const Structure& left : memo[a]) {
          for (const Structure& right : memo[m - a]) {
            Structure s{NodeKind::Complete};
            s.insert(s.end(), left.begin(), left.end());
            s.insert(s.end(), right.begin(), right.end());
            out.push_back(std::move(s));
          }
        }
      }
    }
    memo[m] = std::move(out);
  }
  return memo[k];
}

// Child-edge bookkeeping while replaying a preorder structure.
struct Pending {
  int parent;
  int edge;
};

std::vector<TreeNode> replay_structure(const Structure& pre, bool t1_root_slave) {
  std::vector<TreeNode> nodes(pre.size());
  std::vector<Pending> stack{{-1, -1}};
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const Pending at = stack.back();
    stack.pop_back();
    nodes[i].parent = at.parent;
    nodes[i].edge = at.edge;
    nodes[i].kind = pre[i];
    const int id = static_cast<int>(i);
    switch (pre[i]) {
      case NodeKind::Complete:
        stack.push_back({id, 1});
        stack.push_back({id, 0});  // 0-child replays first (preorder)
        break;
      case NodeKind::Master:
        stack.push_back({id, 0});
        break;
      case NodeKind::Slave: {
        const bool special = t1_root_slave && at.parent == 0 && at.edge == 0;
        stack.push_back({id, special ? 1 : 0});
        break;
      }
      case NodeKind::Leaf:
        break;
    }
  }
  return nodes;
}

TreeShape make_shape(TreeKind kind, int n, const Structure& pre) {
  std::vector<TreeNode> nodes = replay_structure(pre, kind == TreeKind::T1);
  std::vector<int> depth(nodes.size(), 0);
  for (std::size_t i = 1; i < nodes.size(); ++i) depth[i] = depth[nodes[i].parent] + 1;

  TreeShape shape{CodeTree(kind, n, nodes), {}, {}, {}};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind == NodeKind::Leaf || nodes[i].kind == NodeKind::Master)
      shape.slots.push_back(
          {static_cast<int>(i), depth[i], nodes[i].kind == NodeKind::Master});
  }

  // Ascending slot cost. Inside (0,1) the leaf/master interleaving is the
  // same for every x, so one integer key per slot suffices; x = 1 creates
  // leaf/master cost ties resolved leaf-first, which needs its own key.
  auto order_by = [&](auto key) {
    std::vector<int> ord(shape.slots.size());
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
      return key(shape.slots[a]) < key(shape.slots[b]);
    });
    return ord;
  };
  if (kind == TreeKind::T0) {
    shape.slot_order_interior =
        order_by([](const Slot& s) { return 2 * s.depth + (s.is_master ? 1 : 0); });
    shape.slot_order_at_one =
        order_by([](const Slot& s) { return 2 * s.depth + (s.is_master ? 3 : 0); });
  } else {
    shape.slot_order_interior =
        order_by([](const Slot& s) { return 2 * s.depth - (s.is_master ? 0 : 1); });
    shape.slot_order_at_one =
        order_by([](const Slot& s) { return 2 * s.depth + (s.is_master ? 1 : -2); });
  }
  return shape;
}

std::vector<TreeShape> build_shapes(int n, TreeKind kind) {
  std::vector<TreeShape> shapes;
  for (int a = 1; a < n; ++a) {
    for (const Structure& left : subtree_structures(a)) {
      for (const Structure& right : subtree_structures(n - a)) {
        Structure pre;
        pre.push_back(NodeKind::Complete);
        if (kind == TreeKind::T1) pre.push_back(NodeKind::Slave);
        pre.insert(pre.end(), left.begin(), left.end());
        pre.insert(pre.end(), right.begin(), right.end());
        shapes.push_back(make_shape(kind, n, pre));
      }
    }
  }
  return shapes;
}

}  // namespace

const std::vector<TreeShape>& enumerate_shapes(int n, TreeKind kind) {
  if (n < 2) throw Error("shape enumeration requires n >= 2");
  if (n > kMaxEnumerationSymbols)
    throw Error("n = " + std::to_string(n) + " exceeds the enumeration cap " +
                std::to_string(kMaxEnumerationSymbols));
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<TreeShape>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, static_cast<int>(kind)}];
  if (!slot)
    slot = std::make_unique<std::vector<TreeShape>>(build_shapes(n, kind));
  return *slot;
}

CodeTree assign_symbols(const TreeShape& shape, const std::vector<int>& symbol_of_slot) {
  if (symbol_of_slot.size() != shape.slots.size())
    throw Error("assignment size does not match slot count");
  std::vector<TreeNode> nodes;
  nodes.reserve(shape.skeleton.node_count());
  for (int i = 0; i < shape.skeleton.node_count(); ++i) nodes.push_back(shape.skeleton.node(i));
  for (std::size_t i = 0; i < shape.slots.size(); ++i)
    nodes[shape.slots[i].node].symbol = symbol_of_slot[i];
  return CodeTree(shape.skeleton.kind(), shape.skeleton.n(), std::move(nodes));
}

BestTreeResult best_tree(const Rational& x, const SourceDist& dist, TreeKind kind) {
  if (x.sign() < 0 || Rational(1) < x)
    throw Error("best_tree requires x in [0,1], got " + x.str());
  const int n = static_cast<int>(dist.n());
  const auto& shapes = enumerate_shapes(n, kind);
  const bool at_one = x == Rational(1);

  struct Candidate {
    const TreeShape* shape;
    const std::vector<int>* order;
    Rational value;
    Rational l;
    Rational qmass;  // q1 for T0, q0 for T1
  };
  std::optional<Candidate> best;
  std::optional<std::string> best_serial;

  auto materialize = [&](const Candidate& c) {
    std::vector<int> symbol_of_slot(c.shape->slots.size());
    for (int j = 0; j < n; ++j) symbol_of_slot[(*c.order)[j]] = j;
    return assign_symbols(*c.shape, symbol_of_slot);
  };

  for (const TreeShape& shape : shapes) {
    const std::vector<int>& order =
        at_one ? shape.slot_order_at_one : shape.slot_order_interior;
    Rational l, qmass;
    for (int j = 0; j < n; ++j) {
      const Slot& s = shape.slots[order[j]];
      const Rational& p = dist.p(j);
      l += p * Rational(s.depth);
      if (s.is_master == (kind == TreeKind::T0)) qmass += p;
    }
    Rational value = kind == TreeKind::T0 ? l + x * qmass : l - x * qmass;

    bool better = false;
    bool tie_on_serial = false;
    if (!best) {
      better = true;
    } else if (value != best->value) {
      better = value < best->value;
    } else {
      // Value tie: prefer smaller q1 (T0) / larger q0 (T1), then the
      // lexicographically smallest serialization.
      if (qmass != best->qmass)
        better = kind == TreeKind::T0 ? qmass < best->qmass : best->qmass < qmass;
      else
        tie_on_serial = true;
    }
    Candidate cand{&shape, &order, std::move(value), std::move(l), std::move(qmass)};
    if (tie_on_serial) {
      if (!best_serial) best_serial = materialize(*best).serialize();
      std::string serial = materialize(cand).serialize();
      if (serial < *best_serial) {
        best = std::move(cand);
        best_serial = std::move(serial);
      }
    } else if (better) {
      best = std::move(cand);
      best_serial.reset();
    }
  }

  CodeTree tree = materialize(*best);
  TreeMetrics m;
  m.average_length = best->l;
  if (kind == TreeKind::T0) {
    m.q1 = best->qmass;
    m.q0 = Rational(1) - best->qmass;
  } else {
    m.q0 = best->qmass;
    m.q1 = Rational(1) - best->qmass;
  }
  return {std::move(tree), best->value, std::move(m)};
}

ExhaustiveResult exhaustive_optimum(const SourceDist& dist) {
  const int n = static_cast<int>(dist.n());
  if (n > kMaxOracleSymbols)
    throw Error("n = " + std::to_string(n) + " exceeds the oracle cap " +
                std::to_string(kMaxOracleSymbols));

  struct Entry {
    Rational l;
    int shape;
    std::vector<int> symbol_of_slot;
  };
  // Distinct q1 values -> cheapest T0 (and q0 -> cheapest T1). The pair cost
  // is nondecreasing in both lengths for fixed (q1, q0), so only these
  // bucket minima can win.
  std::map<Rational, Entry> buckets[2];

  for (TreeKind kind : {TreeKind::T0, TreeKind::T1}) {
    auto& bucket = buckets[kind == TreeKind::T0 ? 0 : 1];
    const auto& shapes = enumerate_shapes(n, kind);
    for (std::size_t si = 0; si < shapes.size(); ++si) {
      const TreeShape& shape = shapes[si];
      std::vector<int> sym(n);
      std::iota(sym.begin(), sym.end(), 0);
      do {
        Rational l, qmass;
        for (int i = 0; i < n; ++i) {
          const Slot& s = shape.slots[i];
          const Rational& p = dist.p(sym[i]);
          l += p * Rational(s.depth);
          if (s.is_master == (kind == TreeKind::T0)) qmass += p;
        }
        auto it = bucket.find(qmass);
        if (it == bucket.end()) {
          bucket.emplace(std::move(qmass), Entry{std::move(l), static_cast<int>(si), sym});
        } else if (l < it->second.l) {
          it->second = Entry{std::move(l), static_cast<int>(si), sym};
        }
      } while (std::next_permutation(sym.begin(), sym.end()));
    }
  }

  std::optional<Rational> best_cost;
  const Entry* best_t0 = nullptr;
  const Entry* best_t1 = nullptr;
  for (const auto& [q1, e0] : buckets[0]) {
    if (q1.is_zero()) {
      const Rational cost = e0.l;
      if (!best_cost || cost < *best_cost) {
        best_cost = cost;
        best_t0 = &e0;
        best_t1 = &buckets[1].begin()->second;  // T1 never used; any one will do
      }
      continue;
    }
    for (const auto& [q0, e1] : buckets[1]) {
      const Rational cost = stationary_cost(e0.l, q1, e1.l, q0);
      if (!best_cost || cost < *best_cost) {
        best_cost = cost;
        best_t0 = &e0;
        best_t1 = &e1;
      }
    }
  }
  if (!best_cost) throw Error("exhaustive_optimum found no trees");

  CodeTree t0 = assign_symbols(enumerate_shapes(n, TreeKind::T0)[best_t0->shape],
                               best_t0->symbol_of_slot);
  CodeTree t1 = assign_symbols(enumerate_shapes(n, TreeKind::T1)[best_t1->shape],
                               best_t1->symbol_of_slot);
  return {CodePair(std::move(t0), std::move(t1)), *best_cost};
}

}  // namespace aifv
