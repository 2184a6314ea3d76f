#include "aifv/codetree.hpp"

#include <algorithm>
#include <sstream>

#include "aifv/error.hpp"

namespace aifv {

const char* to_string(TreeKind k) { return k == TreeKind::T0 ? "T0" : "T1"; }

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Complete: return "complete";
    case NodeKind::Master: return "master";
    case NodeKind::Slave: return "slave";
    case NodeKind::Leaf: return "leaf";
  }
  return "?";
}

bool is_reduced_rule(Rule r) {
  switch (r) {
    case Rule::ReducedSlotsAssigned:
    case Rule::ReducedNoSlaveSlaveChild:
    case Rule::ReducedSlavePlacement:
    case Rule::ReducedNodeBudget:
    case Rule::ReducedMasterHasAssignedDescendant:
      return true;
    default:
      return false;
  }
}

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Structure: return "structure";
    case Rule::CompleteHasBothChildren: return "complete-has-both-children";
    case Rule::IncompleteHasOnlyZeroChild: return "incomplete-has-only-0-child";
    case Rule::MasterChildIsSlave: return "master-child-is-slave";
    case Rule::LeafIsChildless: return "leaf-is-childless";
    case Rule::SymbolOnLeafOrMasterOnly: return "symbols-only-on-leaves-or-masters";
    case Rule::SymbolAssignedExactlyOnce: return "symbols-assigned-exactly-once";
    case Rule::T0RootComplete: return "t0-root-complete";
    case Rule::T1RootShape: return "t1-root-shape";
    case Rule::ReducedSlotsAssigned: return "reduced-slots-assigned";
    case Rule::ReducedNoSlaveSlaveChild: return "reduced-no-slave-slave-child";
    case Rule::ReducedSlavePlacement: return "reduced-slave-placement";
    case Rule::ReducedNodeBudget: return "reduced-node-budget";
    case Rule::ReducedMasterHasAssignedDescendant:
      return "reduced-master-has-assigned-descendant";
  }
  return "?";
}

CodeTree::CodeTree(TreeKind kind, int n_symbols, std::vector<TreeNode> nodes)
    : kind_(kind), n_(n_symbols), nodes_(std::move(nodes)) {
  link();
}

void CodeTree::link() {
  structure_violations_.clear();
  root_ = -1;
  link_ok_ = false;
  auto bad = [&](int node, const std::string& msg) {
    structure_violations_.push_back({Rule::Structure, node, msg});
  };

  if (nodes_.empty()) {
    bad(-1, "empty node set");
    return;
  }
  const int count = static_cast<int>(nodes_.size());
  for (int i = 0; i < count; ++i) {
    nodes_[i].child[0] = nodes_[i].child[1] = -1;
  }
  bool ok = true;
  for (int i = 0; i < count; ++i) {
    const TreeNode& nd = nodes_[i];
    if (nd.parent == -1) {
      if (root_ != -1) {
        bad(i, "multiple roots (also node " + std::to_string(root_) + ")");
        ok = false;
      }
      root_ = i;
      if (nd.edge != -1) {
        bad(i, "root must not have an incoming edge label");
        ok = false;
      }
      continue;
    }
    if (nd.parent < 0 || nd.parent >= count || nd.parent == i) {
      bad(i, "bad parent reference " + std::to_string(nd.parent));
      ok = false;
      continue;
    }
    if (nd.edge != 0 && nd.edge != 1) {
      bad(i, "edge label must be 0 or 1");
      ok = false;
      continue;
    }
    int& slot = nodes_[nd.parent].child[nd.edge];
    if (slot != -1) {
      bad(i, "parent " + std::to_string(nd.parent) + " already has a child on edge " +
                 std::to_string(nd.edge));
      ok = false;
      continue;
    }
    slot = i;
  }
  if (root_ == -1) {
    bad(-1, "no root node");
    ok = false;
  }
  for (int i = 0; i < count; ++i) {
    if (nodes_[i].symbol != -1 && (nodes_[i].symbol < 0 || nodes_[i].symbol >= n_)) {
      bad(i, "symbol index " + std::to_string(nodes_[i].symbol) + " out of range");
      ok = false;
    }
  }
  if (!ok) return;

  // Reachability from the root doubles as the cycle check.
  std::vector<int> order;
  order.reserve(count);
  preorder_walk(root_, order);
  if (static_cast<int>(order.size()) != count) {
    bad(-1, "node graph is not a single tree (cycle or unreachable nodes)");
    return;
  }
  link_ok_ = true;
}

void CodeTree::preorder_walk(int id, std::vector<int>& out) const {
  std::vector<int> stack{id};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    if (out.size() > nodes_.size()) return;  // damaged graph, bail out
    const TreeNode& nd = nodes_[cur];
    if (nd.child[1] != -1) stack.push_back(nd.child[1]);
    if (nd.child[0] != -1) stack.push_back(nd.child[0]);
  }
}

std::vector<Violation> CodeTree::validate() const {
  std::vector<Violation> out = structure_violations_;
  if (!link_ok_) return out;

  const int count = node_count();
  auto flag = [&](Rule r, int node, std::string detail) {
    out.push_back({r, node, std::move(detail)});
  };

  const TreeNode& root = nodes_[root_];
  const int t1_zero_child =
      kind_ == TreeKind::T1 ? root.child[0] : -1;

  for (int i = 0; i < count; ++i) {
    const TreeNode& nd = nodes_[i];
    const int kids = (nd.child[0] != -1) + (nd.child[1] != -1);
    switch (nd.kind) {
      case NodeKind::Complete:
        if (kids != 2)
          flag(Rule::CompleteHasBothChildren, i,
               "complete node must have a 0-child and a 1-child");
        break;
      case NodeKind::Leaf:
        if (kids != 0) flag(Rule::LeafIsChildless, i, "leaf node has children");
        break;
      case NodeKind::Master:
      case NodeKind::Slave: {
        const bool is_t1_exception = (i == t1_zero_child);
        const int want_edge = is_t1_exception ? 1 : 0;
        if (kids != 1 || nd.child[want_edge] == -1)
          flag(Rule::IncompleteHasOnlyZeroChild, i,
               is_t1_exception
                   ? "T1 root 0-child must have exactly one child, on edge 1"
                   : "incomplete node must have exactly one child, on edge 0");
        break;
      }
    }
    if (nd.kind == NodeKind::Master) {
      const int c = nd.child[0];
      if (c == -1 || nodes_[c].kind != NodeKind::Slave)
        flag(Rule::MasterChildIsSlave, i, "master's child must be a slave");
    }
    if (nd.symbol != -1 && nd.kind != NodeKind::Leaf && nd.kind != NodeKind::Master)
      flag(Rule::SymbolOnLeafOrMasterOnly, i,
           std::string("symbol assigned to a ") + to_string(nd.kind) + " node");
  }

  // Symbol coverage.
  std::vector<int> owner(n_, -1);
  for (int i = 0; i < count; ++i) {
    const int s = nodes_[i].symbol;
    if (s == -1) continue;
    if (owner[s] != -1)
      flag(Rule::SymbolAssignedExactlyOnce, i,
           "symbol " + std::to_string(s) + " already assigned to node " +
               std::to_string(owner[s]));
    else
      owner[s] = i;
  }
  for (int s = 0; s < n_; ++s)
    if (owner[s] == -1)
      flag(Rule::SymbolAssignedExactlyOnce, -1,
           "symbol " + std::to_string(s) + " is not assigned");

  // Root shape per tree kind.
  if (kind_ == TreeKind::T0) {
    if (root.kind != NodeKind::Complete)
      flag(Rule::T0RootComplete, root_, "T0 root must be a complete node");
  } else {
    if (root.kind != NodeKind::Complete)
      flag(Rule::T1RootShape, root_, "T1 root must be a complete node");
    const int z = root.child[0];
    if (z == -1 || nodes_[z].kind != NodeKind::Slave)
      flag(Rule::T1RootShape, z, "T1 root 0-child must be a slave");
    else if (nodes_[z].child[0] != -1)
      flag(Rule::T1RootShape, z, "T1 root must have no \"00\" grandchild");
  }

  // Reduced-tree rules.
  for (int i = 0; i < count; ++i) {
    const TreeNode& nd = nodes_[i];
    if ((nd.kind == NodeKind::Leaf || nd.kind == NodeKind::Master) && nd.symbol == -1)
      flag(Rule::ReducedSlotsAssigned, i,
           std::string(to_string(nd.kind)) + " node carries no symbol");
    if (nd.kind == NodeKind::Slave) {
      for (int c : nd.child)
        if (c != -1 && nodes_[c].kind == NodeKind::Slave)
          flag(Rule::ReducedNoSlaveSlaveChild, i, "slave has a slave child");
      const bool under_master =
          nd.parent != -1 && nodes_[nd.parent].kind == NodeKind::Master;
      if (!under_master && i != t1_zero_child)
        flag(Rule::ReducedSlavePlacement, i,
             "slave is neither a master's child nor the T1 root's 0-child");
    }
    if (nd.kind == NodeKind::Master && nd.child[0] != -1) {
      std::vector<int> below;
      preorder_walk(nd.child[0], below);
      const bool assigned = std::any_of(below.begin(), below.end(), [&](int j) {
        return j != i && nodes_[j].symbol != -1;
      });
      if (!assigned)
        flag(Rule::ReducedMasterHasAssignedDescendant, i,
             "no assigned node below the master");
    }
  }
  if (count > 3 * n_)
    flag(Rule::ReducedNodeBudget, -1,
         std::to_string(count) + " nodes exceeds 3n = " + std::to_string(3 * n_));

  std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return !is_reduced_rule(a.rule) && is_reduced_rule(b.rule);
  });
  return out;
}

bool CodeTree::structurally_valid() const {
  if (!link_ok_) return false;
  const auto v = validate();
  return std::none_of(v.begin(), v.end(),
                      [](const Violation& x) { return !is_reduced_rule(x.rule); });
}

std::string CodeTree::codeword(int node_id) const {
  if (!link_ok_) throw Error("codeword() on a malformed tree");
  std::string rev;
  for (int cur = node_id; nodes_.at(cur).parent != -1; cur = nodes_[cur].parent)
    rev.push_back(static_cast<char>('0' + nodes_[cur].edge));
  std::reverse(rev.begin(), rev.end());
  return rev;
}

int CodeTree::depth(int node_id) const {
  if (!link_ok_) throw Error("depth() on a malformed tree");
  int d = 0;
  for (int cur = node_id; nodes_.at(cur).parent != -1; cur = nodes_[cur].parent) ++d;
  return d;
}

int CodeTree::node_of_symbol(int symbol) const {
  for (int i = 0; i < node_count(); ++i)
    if (nodes_[i].symbol == symbol) return i;
  throw Error("symbol " + std::to_string(symbol) + " not assigned in tree");
}

TreeMetrics CodeTree::metrics(const SourceDist& dist) const {
  if (static_cast<int>(dist.n()) != n_)
    throw Error("tree/distribution symbol count mismatch");
  if (!structurally_valid()) throw Error("metrics() on an invalid tree");
  TreeMetrics m;
  for (int s = 0; s < n_; ++s) {
    const int node_id = node_of_symbol(s);
    const Rational& p = dist.p(static_cast<std::size_t>(s));
    m.average_length += p * Rational(depth(node_id));
    if (nodes_[node_id].kind == NodeKind::Master)
      m.q1 += p;
    else
      m.q0 += p;
  }
  return m;
}

std::string CodeTree::serialize() const {
  if (!link_ok_) throw Error("serialize() on a malformed tree");
  std::vector<int> order;
  order.reserve(nodes_.size());
  preorder_walk(root_, order);
  std::vector<int> new_id(nodes_.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) new_id[order[i]] = static_cast<int>(i);

  std::ostringstream os;
  os << "tree " << to_string(kind_) << " n=" << n_ << "\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const TreeNode& nd = nodes_[order[i]];
    os << "node " << i << " parent=";
    if (nd.parent == -1)
      os << "-";
    else
      os << new_id[nd.parent];
    os << " edge=";
    if (nd.edge == -1)
      os << "-";
    else
      os << nd.edge;
    os << " kind=" << to_string(nd.kind) << " symbol=";
    if (nd.symbol == -1)
      os << "-";
    else
      os << nd.symbol;
    os << "\n";
  }
  return os.str();
}

namespace {

int parse_int_or_dash(const std::string& tok, const char* what, int line_no) {
  if (tok == "-") return -1;
  try {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " value '" + tok + "'", line_no);
  }
}

std::string expect_field(std::istringstream& in, const std::string& key, int line_no) {
  std::string tok;
  if (!(in >> tok) || tok.rfind(key + "=", 0) != 0)
    throw ParseError("expected field '" + key + "='", line_no);
  return tok.substr(key.size() + 1);
}

}  // namespace

CodeTree CodeTree::deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  TreeKind kind = TreeKind::T0;
  int n = 0;
  bool have_header = false;
  std::vector<std::optional<TreeNode>> slots;

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;

    if (!have_header) {
      if (head != "tree") throw ParseError("expected 'tree T0|T1 n=<n>' header", line_no);
      std::string kind_tok;
      if (!(ls >> kind_tok)) throw ParseError("missing tree kind", line_no);
      if (kind_tok == "T0")
        kind = TreeKind::T0;
      else if (kind_tok == "T1")
        kind = TreeKind::T1;
      else
        throw ParseError("tree kind must be T0 or T1, got '" + kind_tok + "'", line_no);
      n = parse_int_or_dash(expect_field(ls, "n", line_no), "n", line_no);
      if (n < 1) throw ParseError("n must be positive", line_no);
      have_header = true;
      continue;
    }

    if (head != "node") throw ParseError("expected 'node' line", line_no);
    std::string id_tok;
    if (!(ls >> id_tok)) throw ParseError("missing node id", line_no);
    const int id = parse_int_or_dash(id_tok, "node id", line_no);
    if (id < 0) throw ParseError("node id must be non-negative", line_no);

    TreeNode nd;
    nd.parent = parse_int_or_dash(expect_field(ls, "parent", line_no), "parent", line_no);
    nd.edge = parse_int_or_dash(expect_field(ls, "edge", line_no), "edge", line_no);
    const std::string kind_tok = expect_field(ls, "kind", line_no);
    if (kind_tok == "complete")
      nd.kind = NodeKind::Complete;
    else if (kind_tok == "master")
      nd.kind = NodeKind::Master;
    else if (kind_tok == "slave")
      nd.kind = NodeKind::Slave;
    else if (kind_tok == "leaf")
      nd.kind = NodeKind::Leaf;
    else
      throw ParseError("unknown node kind '" + kind_tok + "'", line_no);
    nd.symbol = parse_int_or_dash(expect_field(ls, "symbol", line_no), "symbol", line_no);

    if (id >= static_cast<int>(slots.size())) slots.resize(id + 1);
    if (slots[id].has_value())
      throw ParseError("node " + std::to_string(id) + " declared twice", line_no);
    slots[id] = nd;
  }

  if (!have_header) throw ParseError("missing 'tree' header");
  if (slots.empty()) throw ParseError("tree has no nodes");
  std::vector<TreeNode> nodes;
  nodes.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].has_value())
      throw ParseError("node id " + std::to_string(i) + " missing (ids must be dense)");
    nodes.push_back(*slots[i]);
  }
  return CodeTree(kind, n, std::move(nodes));
}

bool CodeTree::operator==(const CodeTree& other) const {
  if (kind_ != other.kind_ || n_ != other.n_) return false;
  if (!link_ok_ || !other.link_ok_) return false;
  return serialize() == other.serialize();
}

}  // namespace aifv
