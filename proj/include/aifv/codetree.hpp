#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aifv/dist.hpp"
#include "aifv/rational.hpp"

namespace aifv {

enum class TreeKind : std::uint8_t { T0, T1 };

enum class NodeKind : std::uint8_t { Complete, Master, Slave, Leaf };

const char* to_string(TreeKind k);
const char* to_string(NodeKind k);

/// One node record. `parent` is -1 for the root, `edge` is the label of the
/// incoming edge (-1 for the root), `symbol` is a sorted symbol index or -1.
struct TreeNode {
  int parent = -1;
  int edge = -1;
  NodeKind kind = NodeKind::Leaf;
  int symbol = -1;
  int child[2] = {-1, -1};  // derived when the node graph is well formed
};

/// Checkable rules. Rules prefixed Reduced* hold for optimizer outputs but
/// are only warned about on user-loaded trees.
enum class Rule : std::uint8_t {
  Structure,            // duplicate ids, bad parent refs, cycle, multiple roots,
                        // two children on one edge, bad symbol index
  CompleteHasBothChildren,
  IncompleteHasOnlyZeroChild,  // master/slave: single child on edge 0
                               // (exception: T1 root's 0-child uses edge 1)
  MasterChildIsSlave,          // and the grandchild is reached via "00"
  LeafIsChildless,
  SymbolOnLeafOrMasterOnly,
  SymbolAssignedExactlyOnce,
  T0RootComplete,
  T1RootShape,          // T1 root complete, 0-child a slave with only a
                        // 1-child, no "00" grandchild
  ReducedSlotsAssigned,       // every leaf and master carries a symbol
  ReducedNoSlaveSlaveChild,
  ReducedSlavePlacement,      // slaves appear only under a master or as the
                              // T1 root's 0-child
  ReducedNodeBudget,          // node count <= 3n
  ReducedMasterHasAssignedDescendant,
};

bool is_reduced_rule(Rule r);
const char* to_string(Rule r);

struct Violation {
  Rule rule;
  int node;  // offending node id, -1 when not tied to one node
  std::string detail;
};

struct TreeMetrics {
  Rational average_length;  // L = sum p_i * |codeword(i)|
  Rational q0;              // mass on leaf-assigned symbols
  Rational q1;              // mass on master-assigned symbols
};

/// A T0- or T1-kind code tree over n symbols. Immutable after construction;
/// node graphs that fail validation can be held (so violations can be
/// reported) but metric/codeword queries reject them.
class CodeTree {
 public:
  /// Builds from raw records. Child links are derived; no rule checking
  /// happens here beyond what linking needs (failures surface in validate()).
  CodeTree(TreeKind kind, int n_symbols, std::vector<TreeNode> nodes);

  TreeKind kind() const { return kind_; }
  int n() const { return n_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const TreeNode& node(int id) const { return nodes_.at(id); }
  int root() const { return root_; }

  /// All violated rules, hard ones first; empty means fully valid (reduced
  /// rules included).
  std::vector<Violation> validate() const;
  bool structurally_valid() const;  // no hard (non-reduced) violations

  /// Edge labels root -> node as '0'/'1' characters.
  std::string codeword(int node_id) const;
  int depth(int node_id) const;

  /// Node carrying the given sorted symbol index (requires a structurally
  /// valid tree with every symbol assigned exactly once).
  int node_of_symbol(int symbol) const;

  TreeMetrics metrics(const SourceDist& dist) const;

  /// Canonical text form: header line, then one line per node in preorder
  /// (0-child before 1-child), ids renumbered in that order.
  std::string serialize() const;
  static CodeTree deserialize(const std::string& text);

  bool operator==(const CodeTree& other) const;

 private:
  void link();
  void preorder_walk(int id, std::vector<int>& out) const;

  TreeKind kind_;
  int n_;
  std::vector<TreeNode> nodes_;
  int root_ = -1;
  bool link_ok_ = false;
  std::vector<Violation> structure_violations_;
};

}  // namespace aifv
