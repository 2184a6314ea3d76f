#include "aifv/dist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

namespace aifv {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool is_power_of_two(const mpz_class& z) {
  if (sgn(z) <= 0) return false;
  return mpz_scan1(z.get_mpz_t(), 0) ==
         mpz_sizeinbase(z.get_mpz_t(), 2) - 1;
}

}  // namespace

Rational parse_prob(const std::string& raw) {
  const std::string text = trimmed(raw);
  if (text.empty()) throw ParseError("empty probability");

  Rational value;
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("malformed fraction '" + text + "'");
    mpq_class q{mpz_class(num), mpz_class(den)};
    if (!is_power_of_two(q.get_den()))
      throw ParseError("denominator of '" + text + "' is not a power of two");
    value = Rational(std::move(q));
  } else if (text.rfind("0.", 0) == 0) {
    const std::string bits = text.substr(2);
    if (bits.empty()) throw ParseError("malformed binary fraction '" + text + "'");
    mpz_class num = 0;
    for (char c : bits) {
      if (c != '0' && c != '1')
        throw ParseError("binary fraction '" + text +
                         "' contains digit other than 0/1");
      num = num * 2 + (c - '0');
    }
    mpq_class q(num);
    mpz_ui_pow_ui(q.get_den_mpz_t(), 2, bits.size());
    q.canonicalize();
    value = Rational(std::move(q));
  } else {
    throw ParseError("expected 'c/2^k' or '0.bits', got '" + text + "'");
  }

  if (value.sign() <= 0 || Rational(1) < value)
    throw ParseError("probability '" + text + "' outside (0,1]");
  return value;
}

SourceDist make_dist(const std::vector<Rational>& values) {
  if (values.size() < 2) throw Error("distribution needs at least 2 symbols");

  Rational sum;
  long b = 0;
  for (const Rational& v : values) {
    if (v.sign() <= 0) throw Error("probabilities must be positive");
    auto k = v.den_pow2_exponent();
    if (!k) throw Error("probability " + v.str() + " has a denominator that is not a power of two");
    b = std::max(b, *k);
    sum += v;
  }
  if (!(sum == Rational(1)))
    throw Error("probabilities sum to " + sum.str() + ", expected 1/1");

  SourceDist d;
  d.perm_.resize(values.size());
  std::iota(d.perm_.begin(), d.perm_.end(), std::size_t{0});
  // Non-increasing by value; ties keep original order.
  std::stable_sort(d.perm_.begin(), d.perm_.end(),
                   [&](std::size_t i, std::size_t j) { return values[j] < values[i]; });
  d.probs_.reserve(values.size());
  for (std::size_t i : d.perm_) d.probs_.push_back(values[i]);
  d.b_ = b;
  return d;
}

std::size_t SourceDist::sorted_index_of(std::size_t original) const {
  for (std::size_t i = 0; i < perm_.size(); ++i)
    if (perm_[i] == original) return i;
  throw Error("symbol index " + std::to_string(original) + " out of range");
}

SourceDist parse_dist_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Rational> values;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trimmed(line);
    if (line.empty()) continue;
    try {
      values.push_back(parse_prob(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return make_dist(values);
}

SourceDist load_dist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open distribution file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dist_text(buf.str());
}

}  // namespace aifv
