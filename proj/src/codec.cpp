#include "aifv/codec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <sstream>

#include "aifv/error.hpp"

namespace aifv {

CodePair::CodePair(CodeTree t0_in, CodeTree t1_in)
    : t0(std::move(t0_in)), t1(std::move(t1_in)) {
  if (t0.kind() != TreeKind::T0 || t1.kind() != TreeKind::T1)
    throw Error("CodePair wants a T0-kind and a T1-kind tree, in that order");
  if (t0.n() != t1.n()) throw Error("CodePair trees disagree on symbol count");
  if (!t0.structurally_valid()) throw Error("CodePair: T0 tree is invalid");
  if (!t1.structurally_valid()) throw Error("CodePair: T1 tree is invalid");
}

void BitStream::push_bit(int bit) {
  if (bit_count_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(1u << (7 - bit_count_ % 8));
  ++bit_count_;
}

int BitStream::bit(std::size_t i) const {
  if (i >= bit_count_) throw Error("bit index out of range");
  return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
}

std::string BitStream::to_bit_string() const {
  std::string s;
  s.reserve(bit_count_);
  for (std::size_t i = 0; i < bit_count_; ++i) s.push_back(static_cast<char>('0' + bit(i)));
  return s;
}

BitStream BitStream::from_bit_string(const std::string& bits) {
  BitStream s;
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error("bit string may contain only 0/1");
    s.push_bit(c - '0');
  }
  return s;
}

BitStream BitStream::from_bytes(std::vector<std::uint8_t> bytes, std::size_t bit_count) {
  if (bytes.size() != (bit_count + 7) / 8)
    throw Error("byte payload does not match the declared bit length");
  BitStream s;
  s.bytes_ = std::move(bytes);
  s.bit_count_ = bit_count;
  // Padding bits must be zero so equal streams compare equal bytewise.
  if (bit_count % 8 != 0 && !s.bytes_.empty()) {
    const std::uint8_t mask =
        static_cast<std::uint8_t>(0xFFu << (8 - bit_count % 8));
    if ((s.bytes_.back() & static_cast<std::uint8_t>(~mask)) != 0)
      throw Error("nonzero padding bits in final byte");
  }
  return s;
}

namespace {

struct CodewordTable {
  // Per sorted symbol: codeword bits and whether it sits on a master.
  std::vector<std::string> word;
  std::vector<bool> master;
};

CodewordTable build_table(const CodeTree& t) {
  CodewordTable tab;
  tab.word.resize(t.n());
  tab.master.resize(t.n());
  for (int s = 0; s < t.n(); ++s) {
    const int node_id = t.node_of_symbol(s);
    tab.word[s] = t.codeword(node_id);
    tab.master[s] = t.node(node_id).kind == NodeKind::Master;
  }
  return tab;
}

}  // namespace

BitStream encode(const std::vector<int>& message, const CodePair& code) {
  const CodewordTable tables[2] = {build_table(code.t0), build_table(code.t1)};
  BitStream out;
  int s = 0;
  for (int sym : message) {
    if (sym < 0 || sym >= code.n())
      throw Error("symbol index " + std::to_string(sym) + " out of range");
    const CodewordTable& tab = tables[s];
    for (char c : tab.word[sym]) out.push_bit(c - '0');
    s = tab.master[sym] ? 1 : 0;
  }
  return out;
}

std::vector<int> decode(const BitStream& stream, std::size_t count, const CodePair& code) {
  const CodeTree* trees[2] = {&code.t0, &code.t1};
  std::vector<int> out;
  out.reserve(count);
  std::size_t pos = 0;
  int s = 0;

  auto next_bit = [&]() {
    if (pos >= stream.bit_count())
      throw Error("stream exhausted inside a codeword");
    return stream.bit(pos++);
  };

  while (out.size() < count) {
    const CodeTree& t = *trees[s];
    int cur = t.root();
    for (bool walking = true; walking;) {
      const TreeNode& nd = t.node(cur);
      switch (nd.kind) {
        case NodeKind::Leaf:
          if (nd.symbol == -1) throw Error("decoder reached an unassigned leaf");
          out.push_back(nd.symbol);
          s = 0;
          walking = false;
          break;
        case NodeKind::Master: {
          // A codeword continues below a master only via "00" (slave then
          // grandchild). Anything else in the next two bits means the word
          // ended here: no T1 codeword starts with "00", so the lookahead is
          // unambiguous.
          const bool continues = pos + 1 < stream.bit_count() &&
                                 stream.bit(pos) == 0 && stream.bit(pos + 1) == 0;
          if (continues) {
            pos += 2;
            cur = t.node(nd.child[0]).child[0];
          } else {
            if (nd.symbol == -1)
              throw Error("decoder dead end at an unassigned master");
            out.push_back(nd.symbol);
            s = 1;
            walking = false;
          }
          break;
        }
        case NodeKind::Slave: {
          const int edge = nd.child[0] != -1 ? 0 : 1;
          if (next_bit() != edge)
            throw Error("decoder dead end at a slave node");
          cur = nd.child[edge];
          break;
        }
        case NodeKind::Complete:
          cur = nd.child[next_bit()];
          break;
      }
    }
  }
  if (pos != stream.bit_count())
    throw Error("trailing bits after the last decoded symbol");
  return out;
}

Rational stationary_cost(const Rational& l0, const Rational& q1_t0,
                         const Rational& l1, const Rational& q0_t1) {
  if (q1_t0.is_zero()) return l0;  // T1 never entered
  const Rational denom = q1_t0 + q0_t1;
  return (q0_t1 * l0 + q1_t0 * l1) / denom;
}

Rational aifv_cost(const CodePair& code, const SourceDist& dist) {
  const TreeMetrics m0 = code.t0.metrics(dist);
  const TreeMetrics m1 = code.t1.metrics(dist);
  return stationary_cost(m0.average_length, m0.q1, m1.average_length, m1.q0);
}

HuffmanResult huffman(const SourceDist& dist) {
  const int n = static_cast<int>(dist.n());

  struct HNode {
    Rational p;
    int min_sym;
    int left = -1, right = -1;
  };
  std::vector<HNode> pool;
  pool.reserve(2 * n);
  for (int i = 0; i < n; ++i) pool.push_back({dist.p(i), i});

  auto heavier = [&pool](int a, int b) {
    if (pool[a].p != pool[b].p) return pool[b].p < pool[a].p;
    return pool[a].min_sym > pool[b].min_sym;
  };
  std::priority_queue<int, std::vector<int>, decltype(heavier)> heap(heavier);
  for (int i = 0; i < n; ++i) heap.push(i);
  while (heap.size() > 1) {
    const int a = heap.top(); heap.pop();
    const int b = heap.top(); heap.pop();
    pool.push_back({pool[a].p + pool[b].p, std::min(pool[a].min_sym, pool[b].min_sym), a, b});
    heap.push(static_cast<int>(pool.size()) - 1);
  }

  // Depth per symbol from the merge tree.
  std::vector<int> depth_of(n, 0);
  std::vector<std::pair<int, int>> stack{{heap.top(), 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    if (pool[id].left == -1) {
      depth_of[pool[id].min_sym] = d;
    } else {
      stack.push_back({pool[id].left, d + 1});
      stack.push_back({pool[id].right, d + 1});
    }
  }

  // Canonical codewords: sort by (depth, symbol) and count upward.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (depth_of[a] != depth_of[b]) return depth_of[a] < depth_of[b];
    return a < b;
  });
  std::vector<std::string> word(n);
  unsigned long code_val = 0;
  int prev_depth = depth_of[order[0]];
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int sym = order[i];
    if (i > 0) {
      code_val = (code_val + 1) << (depth_of[sym] - prev_depth);
    }
    prev_depth = depth_of[sym];
    std::string w(depth_of[sym], '0');
    for (int b = 0; b < depth_of[sym]; ++b)
      if (code_val >> (depth_of[sym] - 1 - b) & 1u) w[b] = '1';
    word[sym] = w;
  }

  // Materialize the all-leaf tree from the codeword set.
  std::vector<TreeNode> nodes(1);
  nodes[0].kind = NodeKind::Complete;
  for (int sym = 0; sym < n; ++sym) {
    int cur = 0;
    for (std::size_t i = 0; i < word[sym].size(); ++i) {
      const int e = word[sym][i] - '0';
      if (nodes[cur].child[e] == -1) {
        TreeNode child;
        child.parent = cur;
        child.edge = e;
        child.kind = i + 1 == word[sym].size() ? NodeKind::Leaf : NodeKind::Complete;
        nodes.push_back(child);
        nodes[cur].child[e] = static_cast<int>(nodes.size()) - 1;
      }
      cur = nodes[cur].child[e];
    }
    nodes[cur].symbol = sym;
  }

  Rational cost;
  for (int i = 0; i < n; ++i) cost += dist.p(i) * Rational(depth_of[i]);
  return {CodeTree(TreeKind::T0, n, std::move(nodes)), cost};
}

double entropy(const SourceDist& dist) {
  double h = 0;
  for (std::size_t i = 0; i < dist.n(); ++i) {
    const double p = dist.p(i).to_double();
    h -= p * std::log2(p);
  }
  return h;
}

double empirical_rate(const CodePair& code, const SourceDist& dist,
                      std::size_t count, std::uint64_t seed) {
  const CodewordTable tables[2] = {build_table(code.t0), build_table(code.t1)};
  std::vector<double> cdf(dist.n());
  double acc = 0;
  for (std::size_t i = 0; i < dist.n(); ++i) {
    acc += dist.p(i).to_double();
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::size_t bits = 0;
  int s = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = uni(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const int sym = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(it - cdf.begin()), dist.n() - 1));
    bits += tables[s].word[sym].size();
    s = tables[s].master[sym] ? 1 : 0;
  }
  return static_cast<double>(bits) / static_cast<double>(count);
}

std::string write_container(const BitStream& stream, int n, std::size_t count) {
  std::ostringstream os;
  os << "aifv2 n=" << n << " count=" << count << " bits=" << stream.bit_count() << "\n";
  for (std::uint8_t b : stream.bytes()) os.put(static_cast<char>(b));
  return os.str();
}

Container read_container(const std::string& data) {
  const auto nl = data.find('\n');
  if (nl == std::string::npos) throw ParseError("container missing header line");
  std::istringstream hs(data.substr(0, nl));
  std::string magic;
  hs >> magic;
  if (magic != "aifv2") throw ParseError("container header must start with 'aifv2'");
  auto field = [&](const char* key) -> std::size_t {
    std::string tok;
    if (!(hs >> tok) || tok.rfind(std::string(key) + "=", 0) != 0)
      throw ParseError(std::string("container header missing ") + key + "=");
    return std::stoull(tok.substr(std::string(key).size() + 1));
  };
  const std::size_t n = field("n");
  const std::size_t count = field("count");
  const std::size_t bits = field("bits");
  const std::string payload = data.substr(nl + 1);
  if (payload.size() != (bits + 7) / 8)
    throw ParseError("container payload is " + std::to_string(payload.size()) +
                     " bytes, expected " + std::to_string((bits + 7) / 8));
  std::vector<std::uint8_t> bytes(payload.begin(), payload.end());
  return {static_cast<int>(n), count, BitStream::from_bytes(std::move(bytes), bits)};
}

}  // namespace aifv
