#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aifv/rational.hpp"

namespace aifv {

/// Parses one probability literal: either a fraction "c/2^k" (the written
/// denominator must be a power of two) or a binary expansion "0.d1d2..dk"
/// with digits in {0,1}. The value must lie in (0,1].
Rational parse_prob(const std::string& text);

/// A source distribution: probabilities sorted non-increasing, each equal to
/// c*2^-b for integer c, summing to exactly one. `b` is the smallest width
/// that represents every entry. `perm` maps sorted position -> the position
/// the value had in the caller's sequence, so user-facing symbol labels
/// survive the sort.
class SourceDist {
 public:
  std::size_t n() const { return probs_.size(); }
  const Rational& p(std::size_t i) const { return probs_.at(i); }
  const std::vector<Rational>& probs() const { return probs_; }
  long b() const { return b_; }

  /// sorted index -> original index
  const std::vector<std::size_t>& perm() const { return perm_; }
  /// original index -> sorted index
  std::size_t sorted_index_of(std::size_t original) const;

  friend SourceDist make_dist(const std::vector<Rational>& values);

 private:
  SourceDist() = default;
  std::vector<Rational> probs_;
  std::vector<std::size_t> perm_;
  long b_ = 0;
};

/// Validates and sorts a probability sequence into a SourceDist.
/// Errors: fewer than two values, a non-positive value, a denominator that is
/// not a power of two, or a sum different from one.
SourceDist make_dist(const std::vector<Rational>& values);

/// Reads a distribution file: UTF-8 text, one probability per line, '#'
/// starts a comment, blank lines ignored. Line order defines the original
/// symbol indices 0..n-1.
SourceDist load_dist_file(const std::string& path);
SourceDist parse_dist_text(const std::string& text);

}  // namespace aifv
