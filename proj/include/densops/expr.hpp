#pragma once

// Symbolic scalar expressions over a coordinate chart.
//
// Every Expr is held in a canonical form: a finite sum of terms c * prod(atom^k)
// with exact rational c and integer exponents k. Atoms are coordinates, sin, cos,
// exp, log of canonical expressions, and multi-term sums raised to negative powers.
// The following rewrites are applied on construction:
//   - positive powers of sums are expanded,
//   - all exp factors of a term merge into one exp of the summed argument,
//   - sin(u)^2 is rewritten as 1 - cos(u)^2,
//   - sin/cos arguments carry a non-negative leading coefficient,
//   - exp(k*log(u)) = u^k for integer k, log(exp(u)) = u.
// Polynomials and trig-polynomials therefore have a unique representation, and
// rational expressions in them can be tested for zero by clearing denominators.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "densops/rational.hpp"

namespace densops {

struct Term;

enum class AtomKind { Coord, Sin, Cos, Exp, Log, Base };

class Expr {
 public:
  Expr();
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)
  Expr(long value);             // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)

  /// Coordinate x_{index+1}; indices are zero-based.
  static Expr coord(int index);

  bool is_zero() const;
  /// The value when the expression is a rational constant.
  std::optional<Rational> constant_value() const;
  const std::vector<Term>& terms() const;

  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  Expr& operator/=(const Expr& o);

  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(Expr a, const Expr& b) { return a *= b; }
  friend Expr operator/(Expr a, const Expr& b) { return a /= b; }
  friend Expr operator-(const Expr& a);

  /// Structural equality of canonical forms. Use expr_equal for mathematical equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const std::vector<Term>> terms) : terms_(std::move(terms)) {}
  friend struct ExprAccess;
  std::shared_ptr<const std::vector<Term>> terms_;
};

struct Atom {
  AtomKind kind;
  int index = -1;  // coordinate index for Coord
  Expr arg;        // argument of Sin/Cos/Exp/Log, the sum for Base
};

struct Factor {
  Atom atom;
  int exponent;
};

using Monomial = std::vector<Factor>;

struct Term {
  Monomial monomial;
  Rational coeff;
};

/// Total order on canonical forms.
int compare(const Expr& a, const Expr& b);
int compare(const Atom& a, const Atom& b);
int compare(const Monomial& a, const Monomial& b);

Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr pow(const Expr& e, int exponent);
Expr inverse(const Expr& e);

/// Exact partial derivative with respect to coordinate `index`.
Expr diff(const Expr& e, int index);

/// Re-normalises every subexpression. Idempotent.
Expr simplify(const Expr& e);

/// Replaces coordinate x_i by values[i].
Expr substitute(const Expr& e, std::span<const Expr> values);

/// IEEE evaluation. Throws DomainError for log of a non-positive value.
double eval(const Expr& e, std::span<const double> point);

/// Largest coordinate index occurring in e, or -1 for constants.
int max_coord_index(const Expr& e);

/// True if any atom of the given kind occurs (at any depth).
bool contains(const Expr& e, AtomKind kind);

/// True if some factor carries a negative exponent (at any depth).
bool has_negative_powers(const Expr& e);

/// Zero test that multiplies through by every denominator before comparing to zero.
bool is_zero_symbolic(const Expr& e);

enum class EqualityPolicy { Symbolic, Numeric, SymbolicThenNumeric };

inline constexpr int kNumericEqualityPoints = 16;
inline constexpr double kNumericEqualityTolerance = 1e-9;

/// Mathematical equality: a - b simplifies to zero, or agrees numerically at
/// kNumericEqualityPoints seeded points in [-1,1]^n.
bool expr_equal(const Expr& a, const Expr& b,
                EqualityPolicy policy = EqualityPolicy::SymbolicThenNumeric);

/// Prints in the DSL grammar. `names` overrides the default x1..xn.
std::string to_string(const Expr& e, std::span<const std::string> names = {});

}  // namespace densops
