#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "aifv/error.hpp"

namespace aifv {

/// Arbitrary-precision rational kept in lowest terms with a positive
/// denominator; zero is canonically 0/1. All solver-critical arithmetic in
/// this library runs on this type, never on floating point.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long num) : v_(num) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw Error("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// 2^e as an exact rational, e may be negative.
  static Rational pow2(long e) {
    mpq_class q;
    if (e >= 0) {
      mpz_ui_pow_ui(q.get_num_mpz_t(), 2, static_cast<unsigned long>(e));
    } else {
      q = 1;
      mpz_ui_pow_ui(q.get_den_mpz_t(), 2, static_cast<unsigned long>(-e));
    }
    return Rational(std::move(q));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.v_ + b.v_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.v_ - b.v_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.v_ * b.v_));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw Error("Rational: division by zero");
    return Rational(mpq_class(a.v_ / b.v_));
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    return c <=> 0;
  }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  bool is_integer() const { return v_.get_den() == 1; }

  /// If the denominator (in lowest terms) is 2^k, returns k; otherwise
  /// nullopt. Integers report 0.
  std::optional<long> den_pow2_exponent() const {
    const mpz_class& d = v_.get_den();
    const auto bits = mpz_sizeinbase(d.get_mpz_t(), 2);
    mpz_class probe;
    mpz_ui_pow_ui(probe.get_mpz_t(), 2, bits - 1);
    if (probe != d) return std::nullopt;
    return static_cast<long>(bits - 1);
  }

  /// Canonical text form "num/den" in lowest terms ("0/1" for zero).
  std::string str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double to_double() const { return v_.get_d(); }

  const mpq_class& raw() const { return v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  mpq_class v_;
};

inline const Rational& min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}
inline const Rational& max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

}  // namespace aifv
