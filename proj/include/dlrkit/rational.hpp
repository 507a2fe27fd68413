#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "dlrkit/errors.hpp"

namespace dlrkit {

using BigInt = boost::multiprecision::cpp_int;

/// Exact arbitrary-precision rational scalar. The backing representation keeps
/// the canonical form (positive denominator, gcd(|num|, den) = 1) after every
/// operation. No floating-point value ever enters or leaves this type.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  explicit Rational(const BigInt& n) : v_(n) {}
  Rational(const BigInt& num, const BigInt& den) {
    if (den.is_zero()) throw Error("rational with zero denominator");
    v_ = Rep(num);
    v_ /= Rep(den);
  }
  Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

  /// Accepts "123", "-4/7". Returns nullopt on malformed text.
  static std::optional<Rational> parse(std::string_view text);

  BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  BigInt denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_integer() const { return denominator() == 1; }
  int sign() const { return v_.sign(); }

  Rational abs() const { return sign() < 0 ? Rational(Rep(-v_)) : *this; }
  Rational reciprocal() const {
    if (is_zero()) throw Error("reciprocal of zero");
    return Rational(denominator(), numerator());
  }

  /// "num/den", always with an explicit denominator ("3/1", "-2/3").
  std::string str() const;
  /// "num" when the value is an integer, "num/den" otherwise.
  std::string str_compact() const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Rep(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Rep(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Rep(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw Error("rational division by zero");
    return Rational(Rep(a.v_ / b.v_));
  }
  Rational operator-() const { return Rational(Rep(-v_)); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  using Rep = boost::multiprecision::cpp_rational;
  explicit Rational(const Rep& v) : v_(v) {}
  Rep v_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Total number of bits in the canonical num/den encoding; the size measure
/// used when auditing constructions that must stay polynomial in input size.
std::size_t bit_length(const Rational& r);
std::size_t bit_length(const BigInt& n);

}  // namespace dlrkit
