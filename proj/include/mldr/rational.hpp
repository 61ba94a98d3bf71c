#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mldr/errors.hpp"

namespace mldr {

// Arbitrary-precision rational, always in canonical form (gcd 1, positive
// denominator). Backed by GMP. Serialized as "p" or "p/q" text so exactness
// survives every file boundary; no floating point is involved anywhere.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors integer literals
  Rational(long n, long d);

  static Rational parse(const std::string& text);  // throws FormatError

  Rational operator+(const Rational& o) const { return Rational(v_ + o.v_); }
  Rational operator-(const Rational& o) const { return Rational(v_ - o.v_); }
  Rational operator*(const Rational& o) const { return Rational(v_ * o.v_); }
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-v_); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator<=(const Rational& o) const { return v_ <= o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }
  bool operator>=(const Rational& o) const { return v_ >= o.v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational inverse() const;
  Rational abs() const { return Rational(::abs(v_)); }

  std::string str() const;  // "p" when integral, else "p/q"
  double to_double() const { return v_.get_d(); }

  const mpq_class& raw() const { return v_; }

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) {}
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline Rational operator*(long n, const Rational& r) { return Rational(n) * r; }

}  // namespace mldr
