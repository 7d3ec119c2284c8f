#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "densops/expr.hpp"

namespace densops {

/// Base coordinates x1..xn of a chart. The vertical coordinate t is never part of a chart;
/// it is carried by density weights and powers of the weight operator.
class Chart {
 public:
  explicit Chart(int dimension);
  explicit Chart(std::vector<std::string> names);

  int dimension() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> index_of(std::string_view name) const;
  /// Throws IndexError unless 0 <= index < dimension.
  void require_index(int index) const;

 private:
  std::vector<std::string> names_;
};

using ExprMatrix = std::vector<std::vector<Expr>>;

/// Cofactor expansion; intended for small matrices.
Expr determinant(const ExprMatrix& m);
ExprMatrix adjugate(const ExprMatrix& m);
ExprMatrix jacobian(std::span<const Expr> map, int dimension);

using Point = std::vector<double>;

/// Coordinate change x -> x'(x) with an explicit inverse x'(x) -> x.
///
/// Both directions are checked numerically at seeded sample points of a source box
/// (default [-1,1]^n); the Jacobian determinant must not vanish there.
class ChartChange {
 public:
  ChartChange(std::vector<Expr> forward, std::vector<Expr> inverse);
  ChartChange(std::vector<Expr> forward, std::vector<Expr> inverse, std::vector<Point> source_samples);

  static ChartChange identity(int dimension);

  int dimension() const { return static_cast<int>(forward_.size()); }
  /// x'^a as functions of x.
  const std::vector<Expr>& forward() const { return forward_; }
  /// x^i as functions of x'.
  const std::vector<Expr>& inverse() const { return inverse_; }
  const std::vector<Point>& source_samples() const { return source_samples_; }
  /// Images of the source samples under the forward map.
  const std::vector<Point>& target_samples() const { return target_samples_; }

  /// The same change read backwards: x' -> x.
  ChartChange inverted() const;
  /// This change followed by `next`: x -> x' -> x''.
  ChartChange then(const ChartChange& next) const;

  /// d x'^a / d x^i as functions of x.
  ExprMatrix forward_jacobian() const;
  /// d x^i / d x'^a as functions of x'.
  ExprMatrix inverse_jacobian() const;
  /// det(dx'/dx) as a function of x.
  Expr forward_det() const;
  /// det(dx/dx') as a function of x'.
  Expr inverse_det() const;

  /// Expresses a function of x in the primed coordinates.
  Expr to_target(const Expr& e) const { return substitute(e, inverse_); }
  /// Expresses a function of x' in the source coordinates.
  Expr to_source(const Expr& e) const { return substitute(e, forward_); }

  Point map_point(const Point& x) const;

 private:
  std::vector<Expr> forward_;
  std::vector<Expr> inverse_;
  std::vector<Point> source_samples_;
  std::vector<Point> target_samples_;
};

/// Seeded sample points in [-1,1]^n.
std::vector<Point> default_samples(int dimension, int count = 16);

}  // namespace densops
