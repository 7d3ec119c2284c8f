#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "densops/expr.hpp"

namespace densops {

/// Where scalar products are integrated. The flat torus [0,2pi]^n is the default and the
/// only domain on which adjointness is certified; boxes use tensor Gauss-Legendre rules.
struct IntegrationDomain {
  enum class Kind { Torus, Box };

  Kind kind = Kind::Torus;
  int dimension = 1;
  std::vector<std::pair<double, double>> bounds;  // Box only
  int order = 32;                                 // Gauss points per axis, Box only

  static IntegrationDomain torus(int dimension);
  static IntegrationDomain box(std::vector<std::pair<double, double>> bounds, int order = 32);
};

/// Value of an integral. On the torus exact_factor, when present, is the exact Fourier
/// mean: value == exact_factor * (2 pi)^n.
struct IntegralValue {
  double value = 0.0;
  std::optional<Rational> exact_factor;

  bool exact() const { return exact_factor.has_value(); }
};

inline constexpr int kTorusQuadraturePoints = 256;

/// Mean of a trig-polynomial in sin(x_i), cos(x_i) over the torus; nullopt outside that class.
std::optional<Rational> torus_mean_exact(const Expr& e);

/// Composite trapezoid rule on the periodic grid.
double torus_quadrature(const Expr& e, int dimension, int points_per_axis = kTorusQuadraturePoints);

/// Exact Fourier path when possible, quadrature otherwise. Throws IntegrationError for
/// integrands with log or negative-power structure, or that are not 2pi-periodic.
IntegralValue integrate_torus(const Expr& e, int dimension);

/// Gauss-Legendre nodes and weights on [-1,1] (Golub-Welsch).
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);

double integrate_box(const Expr& e, const IntegrationDomain& box);

IntegralValue integrate(const Expr& e, const IntegrationDomain& domain);

}  // namespace densops
