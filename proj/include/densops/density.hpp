#pragma once

#include <map>

#include "densops/chart.hpp"
#include "densops/expr.hpp"
#include "densops/integrate.hpp"

namespace densops {

/// Finite sum of densities s_l(x)|Dx|^l, written as the quasipolynomial sum s_l(x) t^l.
class Density {
 public:
  Density() = default;

  /// The single term coeff * t^weight.
  static Density term(const Rational& weight, const Expr& coeff);

  const std::map<Rational, Expr>& terms() const { return terms_; }
  /// Coefficient of t^weight (zero when absent).
  Expr coefficient(const Rational& weight) const;
  bool is_zero() const { return terms_.empty(); }

  /// Adds coeff * t^weight, dropping the term if it cancels.
  void add(const Rational& weight, const Expr& coeff);

  Density& operator+=(const Density& o);
  Density& operator-=(const Density& o);
  friend Density operator+(Density a, const Density& b) { return a += b; }
  friend Density operator-(Density a, const Density& b) { return a -= b; }
  friend Density operator*(const Expr& c, const Density& d);
  friend bool operator==(const Density& a, const Density& b);

 private:
  std::map<Rational, Expr> terms_;
};

/// Graded product: weights add.
Density density_mul(const Density& a, const Density& b);
inline Density operator*(const Density& a, const Density& b) { return density_mul(a, b); }

/// The weight operator t d/dt: multiplies each weight-l term by l.
Density weight_op(const Density& d);

/// The density in the primed chart: s(x(x')) det(dx/dx')^l |Dx'|^l. The determinant must be
/// positive on the target sample points (orientation-preserving changes only).
Density density_pullback(const Density& d, const ChartChange& ch);

/// Canonical pairing: integral of s_a s_b over the domain summed over weight pairs with
/// a + b = 1; zero when no weights are complementary.
IntegralValue scalar_product(const Density& a, const Density& b, const IntegrationDomain& domain);

bool density_equal(const Density& a, const Density& b,
                   EqualityPolicy policy = EqualityPolicy::SymbolicThenNumeric);

/// Prints as "coeff*t^(w) + ...".
std::string to_string(const Density& d, std::span<const std::string> names = {});

}  // namespace densops
