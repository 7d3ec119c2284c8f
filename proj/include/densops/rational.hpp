#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace densops {

/// Exact rational number, always kept in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long value);  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);

  /// Parses "p", "-p" or "p/q".
  static Rational parse(std::string_view text);

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  /// Value as a machine integer when integral and in range.
  std::optional<long> to_long() const;
  double to_double() const { return v_.get_d(); }
  std::string to_string() const { return v_.get_str(); }

  /// Factorisation of a positive rational as (base, exponent) pairs sorted by base, with
  /// negative exponents for the denominator. Bases are primes below 10^6 plus at most one
  /// unfactored cofactor each from numerator and denominator; nullopt if not positive or
  /// out of machine range.
  std::optional<std::vector<std::pair<long, int>>> factorize() const;
  Rational abs() const;
  Rational inverse() const;
  Rational pow(int exponent) const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  mpq_class v_{0};
};

}  // namespace densops
