// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Everything solver-facing is checked with exact rational equality.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "aifv/codec.hpp"
#include "aifv/solvers.hpp"
#include "envelope_oracle.hpp"
#include "fixtures.hpp"

using namespace aifv;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s: %d. %s%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// All distributions representable with b <= bits: partitions of 2^bits into
// exactly n non-increasing positive parts.
void dyadic_partitions(int n, long bits, std::vector<SourceDist>& out) {
  const long total = 1L << bits;
  std::vector<long> parts;
  auto rec = [&](auto&& self, long remaining, long cap, int left) -> void {
    if (left == 1) {
      if (remaining >= 1 && remaining <= cap) {
        std::vector<Rational> values;
        for (long c : parts) values.push_back(Rational(c) * Rational::pow2(-bits));
        values.push_back(Rational(remaining) * Rational::pow2(-bits));
        out.push_back(make_dist(values));
      }
      return;
    }
    for (long c = std::min(cap, remaining - (left - 1)); c >= 1; --c) {
      if (c * left < remaining) break;
      parts.push_back(c);
      self(self, remaining - c, c, left - 1);
      parts.pop_back();
    }
  };
  rec(rec, total, total, n);
}

struct InstanceRow {
  SourceDist dist;
  Rational oracle_cost;
  SolveReport binary;
  SolveReport iterative;
  SolveReport ellipsoid;
  Rational huffman_cost;
  double entropy_bits;
};

std::string describe(const SourceDist& d) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < d.n(); ++i) os << (i ? "," : "") << d.p(i).str();
  os << ")";
  return os.str();
}

}  // namespace

int main() {
  const auto t_start = std::chrono::steady_clock::now();

  // ---- shared instance sweep: full dyadic grid n in 2..5, b <= 4, plus 200
  // random instances with n <= 5, b <= 6.
  std::vector<SourceDist> instances;
  for (int n = 2; n <= 5; ++n) dyadic_partitions(n, 4, instances);
  const std::size_t grid_count = instances.size();
  {
    std::mt19937_64 rng(20240809);
    for (int i = 0; i < 200; ++i) {
      const int n = 2 + static_cast<int>(rng() % 4);
      instances.push_back(fixtures::random_dyadic_dist(n, 6, rng));
    }
  }

  std::vector<InstanceRow> rows;
  rows.reserve(instances.size());
  std::string first_disagreement;
  for (const SourceDist& d : instances) {
    InstanceRow row{d,
                    solve_exhaustive(d).cost,
                    solve_binary_search(d),
                    solve_iterative(d),
                    solve_ellipsoid(d),
                    huffman(d).cost,
                    entropy(d)};
    if (first_disagreement.empty()) {
      if (!(row.binary.cost == row.oracle_cost))
        first_disagreement = "binary-search vs oracle on " + describe(d);
      else if (!(row.iterative.cost == row.oracle_cost))
        first_disagreement = "iterative vs oracle on " + describe(d);
      else if (!(row.ellipsoid.cost == row.oracle_cost))
        first_disagreement = "ellipsoid vs oracle on " + describe(d);
    }
    rows.push_back(std::move(row));
  }

  // ---- 1. oracle equivalence
  {
    std::ostringstream detail;
    detail << grid_count << " grid + " << (rows.size() - grid_count)
           << " random instances";
    if (!first_disagreement.empty()) detail << "; first: " << first_disagreement;
    report(1, "oracle equivalence of all three solvers", first_disagreement.empty(),
           detail.str());
  }

  // ---- 2. binary-search iteration count
  {
    bool ok = true;
    std::string detail;
    for (const InstanceRow& row : rows) {
      const long want = 2 * (row.dist.b() + 1);
      if (row.binary.iterations != want) {
        ok = false;
        detail = describe(row.dist) + " took " + std::to_string(row.binary.iterations) +
                 " halvings, expected " + std::to_string(want);
        break;
      }
    }
    for (long b = 2; ok && b <= 8; ++b) {
      const Rational p2 = Rational::pow2(-b);
      const SourceDist d = make_dist({Rational(1) - p2, p2});
      const SolveReport r = solve_binary_search(d);
      if (r.iterations != 2 * (b + 1)) {
        ok = false;
        detail = "b=" + std::to_string(b) + " took " + std::to_string(r.iterations);
      }
    }
    report(2, "binary search performs exactly 2(b+1) halvings", ok, detail);
  }

  // ---- 3. GLS oracle-call budget
  {
    bool ok = true;
    std::string detail;
    long worst_calls = 0, worst_budget = 0;
    for (const InstanceRow& row : rows) {
      const long budget =
          ellipsoid_call_budget(static_cast<int>(row.dist.n()), row.dist.b());
      if (row.ellipsoid.oracle_calls > budget) {
        ok = false;
        detail = describe(row.dist) + " used " +
                 std::to_string(row.ellipsoid.oracle_calls) + " > budget " +
                 std::to_string(budget);
        break;
      }
      if (worst_budget == 0 ||
          row.ellipsoid.oracle_calls * worst_budget > worst_calls * budget) {
        worst_calls = row.ellipsoid.oracle_calls;
        worst_budget = budget;
      }
    }
    if (ok)
      detail = "worst usage " + std::to_string(worst_calls) + "/" +
               std::to_string(worst_budget) + " calls";
    report(3, "ellipsoid stays within the oracle-call budget", ok, detail);
  }

  // ---- 4. breakpoint spacing on exhaustive arrangements (n <= 4, b <= 4)
  {
    bool ok = true;
    std::string detail;
    std::size_t checked = 0;
    std::vector<SourceDist> small;
    for (int n = 2; n <= 4; ++n) dyadic_partitions(n, 4, small);
    for (const SourceDist& d : small) {
      const Rational eps0 = epsilon0(d.b());
      for (TreeKind kind : {TreeKind::T0, TreeKind::T1}) {
        const auto hull =
            envelope_oracle::lower_envelope(envelope_oracle::all_cost_lines(d, kind));
        const auto xs = envelope_oracle::breakpoints(hull);
        for (std::size_t i = 0; ok && i + 1 < xs.size(); ++i) {
          ++checked;
          if (xs[i + 1] - xs[i] < eps0) {
            ok = false;
            detail = "breakpoints " + xs[i].str() + " and " + xs[i + 1].str() +
                     " of " + std::string(to_string(kind)) + " on " + describe(d) +
                     " are closer than " + eps0.str();
          }
        }
        if (!ok) break;
      }
      if (!ok) break;
    }
    if (ok)
      detail = std::to_string(small.size()) + " instances, " + std::to_string(checked) +
               " adjacent breakpoint pairs";
    report(4, "envelope breakpoints are spaced at least 2^-2(b+1) apart", ok, detail);
  }

  // ---- 5. worked-example reproduction
  {
    bool ok = true;
    std::string detail;
    try {
      const CodePair pair = fixtures::fig1_pair();
      const std::vector<int> msg{1, 3, 1, 2, 0, 0};  // b d b c a a
      const std::string full = encode(msg, pair).to_bit_string();
      // The caption's groups 10|1100|10|11|01|0; their first twelve bits are
      // the example's indexed table 101100101101.
      if (full != "1011001011010") {
        ok = false;
        detail = "encode gave " + full;
      } else if (full.substr(0, 12) != "101100101101" ||
                 encode({1, 3, 1, 2, 0}, pair).to_bit_string() != "101100101101") {
        ok = false;
        detail = "twelve-bit prefix mismatch";
      } else if (decode(encode(msg, pair), 6, pair) != msg) {
        ok = false;
        detail = "decode did not invert the stream";
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    report(5, "figure-1 codeword table encodes/decodes bit-exactly", ok, detail);
  }

  // ---- 6. codec properties: 1000 roundtrips + empirical rate within 1%
  {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(99991);
    for (int round = 0; ok && round < 1000; ++round) {
      const int n = 2 + static_cast<int>(rng() % 4);
      auto pick = [&](TreeKind kind) {
        const auto& shapes = enumerate_shapes(n, kind);
        std::vector<int> sym(n);
        std::iota(sym.begin(), sym.end(), 0);
        std::shuffle(sym.begin(), sym.end(), rng);
        return assign_symbols(shapes[rng() % shapes.size()], sym);
      };
      const CodePair pair(pick(TreeKind::T0), pick(TreeKind::T1));
      std::vector<int> msg(rng() % 64);
      for (int& m : msg) m = static_cast<int>(rng() % n);
      if (decode(encode(msg, pair), msg.size(), pair) != msg) {
        ok = false;
        detail = "roundtrip failure at round " + std::to_string(round);
      }
    }
    if (ok) {
      const SourceDist d = make_dist({Rational(1, 2), Rational(3, 8), Rational(1, 8)});
      const SolveReport r = solve_binary_search(d);
      const double predicted = r.cost.to_double();
      const double measured = empirical_rate(r.pair, d, 1000000, 424242);
      const double rel = std::abs(measured - predicted) / predicted;
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
      std::ostringstream os;
      os << "1000 roundtrips; rate " << measured << " vs cost " << predicted
         << " (rel err " << rel << "), " << ms << " ms";
      detail = os.str();
      ok = rel < 0.01 && ms < 60000;
    }
    report(6, "randomized roundtrips and million-symbol empirical rate", ok, detail);
  }

  // ---- 7. baseline dominance and strict improvement
  {
    std::size_t improved = 0;
    double max_redundancy = 0;
    std::string worst_instance;
    std::string ordering_failure;
    std::size_t redundancy_failures = 0;
    for (const InstanceRow& row : rows) {
      const double cost = row.oracle_cost.to_double();
      if (ordering_failure.empty() && cost + 1e-9 < row.entropy_bits)
        ordering_failure = "cost below entropy on " + describe(row.dist);
      if (ordering_failure.empty() && row.huffman_cost < row.oracle_cost)
        ordering_failure = "cost above Huffman on " + describe(row.dist);
      const double redundancy = cost - row.entropy_bits;
      if (redundancy > max_redundancy) {
        max_redundancy = redundancy;
        worst_instance = describe(row.dist);
      }
      if (redundancy > 0.5 + 1e-9) ++redundancy_failures;
      if (row.oracle_cost < row.huffman_cost) ++improved;
    }
    const bool ok =
        ordering_failure.empty() && redundancy_failures == 0 && improved > 0;
    std::ostringstream os;
    if (!ordering_failure.empty()) os << ordering_failure << "; ";
    if (improved == 0) os << "no instance beat Huffman; ";
    os << improved << "/" << rows.size() << " instances strictly beat Huffman; max "
       << "redundancy " << max_redundancy << " on " << worst_instance;
    if (redundancy_failures > 0) {
      // Unreachable target on highly skewed sources: every codeword holds at
      // least one bit (both roots are complete internal nodes), so every
      // pair costs >= 1 bit/symbol, yet H drops below 1/2 here.
      os << "; " << redundancy_failures
         << " highly skewed instances exceed the 1/2 redundancy target: nonempty "
            "codewords force every pair's cost to at least 1 bit/symbol (the "
            "oracle confirms the optimum) while the entropy falls below 1/2";
    }
    report(7, "entropy <= AIFV-2 cost <= Huffman with redundancy <= 1/2", ok, os.str());
  }

  // ---- 8. structural validation of 10^4 mutated trees
  {
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(31337);
    int done = 0;
    while (ok && done < 10000) {
      const int n = 2 + static_cast<int>(rng() % 4);
      const TreeKind kind = rng() % 2 ? TreeKind::T0 : TreeKind::T1;
      const auto& shapes = enumerate_shapes(n, kind);
      std::vector<int> sym(n);
      std::iota(sym.begin(), sym.end(), 0);
      std::shuffle(sym.begin(), sym.end(), rng);
      const CodeTree base = assign_symbols(shapes[rng() % shapes.size()], sym);

      std::vector<TreeNode> nodes;
      for (int i = 0; i < base.node_count(); ++i) nodes.push_back(base.node(i));
      const int which = static_cast<int>(rng() % 3);
      std::set<Rule> expected;
      std::set<int> anchors{-1};

      if (which == 0) {  // kind flip
        const int victim = 1 + static_cast<int>(rng() % (nodes.size() - 1));
        const NodeKind old = nodes[victim].kind;
        NodeKind now = old;
        while (now == old) now = static_cast<NodeKind>(rng() % 4);
        nodes[victim].kind = now;
        expected = {Rule::CompleteHasBothChildren, Rule::IncompleteHasOnlyZeroChild,
                    Rule::MasterChildIsSlave,      Rule::LeafIsChildless,
                    Rule::SymbolOnLeafOrMasterOnly, Rule::T1RootShape,
                    Rule::ReducedSlotsAssigned,    Rule::ReducedNoSlaveSlaveChild,
                    Rule::ReducedSlavePlacement,   Rule::ReducedMasterHasAssignedDescendant};
        anchors = {victim, nodes[victim].parent};
        for (int c : {0, 1}) {
          for (std::size_t j = 0; j < nodes.size(); ++j)
            if (nodes[j].parent == victim && nodes[j].edge == c)
              anchors.insert(static_cast<int>(j));
        }
      } else if (which == 1) {  // symbol move
        std::vector<int> carriers;
        for (std::size_t j = 0; j < nodes.size(); ++j)
          if (nodes[j].symbol != -1) carriers.push_back(static_cast<int>(j));
        const int src = carriers[rng() % carriers.size()];
        int dst = src;
        while (dst == src) dst = static_cast<int>(rng() % nodes.size());
        nodes[dst].symbol = nodes[src].symbol;
        nodes[src].symbol = -1;
        expected = {Rule::SymbolOnLeafOrMasterOnly, Rule::SymbolAssignedExactlyOnce,
                    Rule::ReducedSlotsAssigned, Rule::ReducedMasterHasAssignedDescendant};
        anchors = {-1, src, dst};
      } else {  // subtree deletion
        const int victim = 1 + static_cast<int>(rng() % (nodes.size() - 1));
        const int parent = nodes[victim].parent;
        std::vector<bool> dead(nodes.size(), false);
        dead[victim] = true;
        for (bool grew = true; grew;) {
          grew = false;
          for (std::size_t j = 0; j < nodes.size(); ++j)
            if (!dead[j] && nodes[j].parent >= 0 && dead[nodes[j].parent]) {
              dead[j] = true;
              grew = true;
            }
        }
        std::vector<TreeNode> kept;
        std::vector<int> remap(nodes.size(), -1);
        for (std::size_t j = 0; j < nodes.size(); ++j)
          if (!dead[j]) {
            remap[j] = static_cast<int>(kept.size());
            kept.push_back(nodes[j]);
          }
        for (TreeNode& nd : kept)
          if (nd.parent >= 0) nd.parent = remap[nd.parent];
        nodes = std::move(kept);
        expected = {Rule::CompleteHasBothChildren, Rule::IncompleteHasOnlyZeroChild,
                    Rule::MasterChildIsSlave, Rule::SymbolAssignedExactlyOnce,
                    Rule::T1RootShape, Rule::ReducedMasterHasAssignedDescendant};
        anchors = {-1, remap[parent]};
      }

      const CodeTree mutated(base.kind(), base.n(), nodes);
      const auto vs = mutated.validate();
      bool labelled = false;
      for (const Violation& v : vs)
        if (expected.count(v.rule) && anchors.count(v.node)) labelled = true;
      if (vs.empty() || !labelled) {
        ok = false;
        detail = "mutation type " + std::to_string(which) + " escaped with " +
                 std::to_string(vs.size()) + " violations at round " +
                 std::to_string(done);
      }
      ++done;
    }
    if (ok) detail = "10000 mutations, each flagged with an attributable rule";
    report(8, "mutated trees are rejected with correct violation labels", ok, detail);
  }

  // ---- 9. envelope shape on a 256-point grid
  {
    bool ok = true;
    std::string detail;
    const int grid = 256;
    for (const InstanceRow& row : rows) {
      const SourceDist& d = row.dist;
      std::vector<Rational> e0s, e1s;
      e0s.reserve(grid);
      e1s.reserve(grid);
      for (int k = 0; k < grid; ++k) {
        const Rational x(k, grid - 1);
        const EnvelopePoint env = envelope_at(x, d);
        e0s.push_back(env.e0);
        e1s.push_back(env.e1);
      }
      for (int k = 0; ok && k + 1 < grid; ++k) {
        if (e0s[k + 1] < e0s[k]) ok = false;          // E0 non-decreasing
        if (e1s[k] < e1s[k + 1]) ok = false;          // E1 non-increasing
      }
      for (int k = 0; ok && k + 2 < grid; ++k) {
        if (e0s[k + 1] - e0s[k] < e0s[k + 2] - e0s[k + 1]) ok = false;  // concave
        if (e1s[k + 1] - e1s[k] < e1s[k + 2] - e1s[k + 1]) ok = false;
      }
      if (ok && !(e0s.front() < e1s.front())) ok = false;  // E0(0) < E1(0)
      if (ok && e0s.back() < e1s.back()) ok = false;       // E0(1) >= E1(1)
      if (!ok) {
        detail = "shape violation on " + describe(d);
        break;
      }
    }
    if (ok)
      detail = std::to_string(rows.size()) + " instances on a " + std::to_string(grid) +
               "-point grid, exact comparisons";
    report(9, "E0/E1 monotone concave with the required sign pattern", ok, detail);
  }

  const auto total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t_start)
                            .count();
  std::printf("%d/9 criteria passed in %lld ms\n", 9 - failures,
              static_cast<long long>(total_ms));
  return failures == 0 ? 0 : 1;
}
