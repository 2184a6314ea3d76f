#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aifv/codetree.hpp"
#include "aifv/dist.hpp"

namespace aifv {

/// A code: one T0-kind and one T1-kind tree over the same symbol set.
struct CodePair {
  CodePair(CodeTree t0_in, CodeTree t1_in);
  CodeTree t0;
  CodeTree t1;
  int n() const { return t0.n(); }
};

/// Bit sequence packed MSB-first into bytes; the final partial byte is
/// zero-padded and the exact bit length is carried separately.
class BitStream {
 public:
  void push_bit(int bit);
  int bit(std::size_t i) const;
  std::size_t bit_count() const { return bit_count_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  std::string to_bit_string() const;
  static BitStream from_bit_string(const std::string& bits);
  static BitStream from_bytes(std::vector<std::uint8_t> bytes, std::size_t bit_count);

  bool operator==(const BitStream& o) const = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_count_ = 0;
};

/// Encodes a message of sorted symbol indices. The first symbol uses T0;
/// after a symbol placed on a leaf the next uses T0, after a master T1.
BitStream encode(const std::vector<int>& message, const CodePair& code);

/// Inverts encode() for a stream holding exactly `count` symbols. Walks the
/// current tree bit by bit, reading up to two bits ahead to tell a master
/// node's own codeword from the continuation into its subtree ("00" always
/// continues; anything else terminates at the master).
std::vector<int> decode(const BitStream& stream, std::size_t count, const CodePair& code);

/// Asymptotic average codeword length of the pair (bits per symbol). When
/// q1(T0) = 0, T1 is never entered and the cost is just L(T0).
Rational aifv_cost(const CodePair& code, const SourceDist& dist);

/// The stationary-cost formula behind aifv_cost, in terms of the only four
/// quantities it depends on: (q0(T1)*L(T0) + q1(T0)*L(T1)) / (q1(T0)+q0(T1)),
/// collapsing to L(T0) when q1(T0) = 0.
Rational stationary_cost(const Rational& l0, const Rational& q1_t0,
                         const Rational& l1, const Rational& q0_t1);

struct HuffmanResult {
  CodeTree tree;  // all-leaf T0 tree
  Rational cost;
};

/// Minimum-redundancy single prefix tree. Ties merge the two lowest
/// probabilities preferring the candidate containing the lowest symbol
/// index; codewords are assigned canonically by (depth, symbol).
HuffmanResult huffman(const SourceDist& dist);

/// Shannon entropy in bits, floating point; reporting only.
double entropy(const SourceDist& dist);

/// Mean bits/symbol over `count` i.i.d. symbols drawn from `dist` (seeded),
/// encoded with `code`. Diagnostic companion to aifv_cost.
double empirical_rate(const CodePair& code, const SourceDist& dist,
                      std::size_t count, std::uint64_t seed);

/// Container format: header "aifv2 n=<n> count=<symbols> bits=<bitlen>\n"
/// followed by the packed bytes.
std::string write_container(const BitStream& stream, int n, std::size_t count);
struct Container {
  int n;
  std::size_t count;
  BitStream stream;
};
Container read_container(const std::string& data);

}  // namespace aifv
