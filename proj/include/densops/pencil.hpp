#pragma once

#include <vector>

#include "densops/operator.hpp"

namespace densops {

/// Vector field X = X^i d_i on the base chart.
struct VectorField {
  std::vector<Expr> components;

  int dimension() const { return static_cast<int>(components.size()); }
};

/// Covector field gamma_i of a connection on densities: nabla_i |Dx| = gamma_i |Dx|.
struct Connection {
  std::vector<Expr> components;

  int dimension() const { return static_cast<int>(components.size()); }
};

/// A w-free operator A^{ij} d_i d_j + A^i d_i + A acting on densities of weight lambda0.
class LambdaOperator {
 public:
  /// Throws OrderError if `op` contains w or has order above 2.
  LambdaOperator(DiffOperator op, Rational lambda0);

  const DiffOperator& op() const { return op_; }
  const Rational& lambda0() const { return lambda0_; }

 private:
  DiffOperator op_;
  Rational lambda0_;
};

/// True for the weights 0, 1/2, 1 at which the self-adjoint pencil is not determined.
bool is_forbidden_weight(const Rational& lambda);

/// Lie derivative of densities: X^i d_i + w (d_i X^i).
DiffOperator lie_lift(const VectorField& x);

/// Horizontal lift X^i d_i + gamma_i X^i w.
DiffOperator horizontal_lift(const VectorField& x, const Connection& gamma);

/// [X, Y]^i = X^j d_j Y^i - Y^j d_j X^i.
VectorField commutator(const VectorField& x, const VectorField& y);

/// Recovers the symbol (S, B, C) of the unique self-adjoint normalised pencil through L:
///   S = A (symmetrised), B^i = (A^i - d_k A^{ki}) / (2 l0 - 1),
///   C = A / (l0 (l0 - 1)) - (d_i A^i - d_i d_k A^{ki}) / ((l0 - 1)(2 l0 - 1)).
/// Throws ForbiddenWeightError for l0 in {0, 1/2, 1}.
SymbolTriple pencil_symbol(const LambdaOperator& l);

/// build_canonical(pencil_symbol(l)).
DiffOperator canonical_pencil(const LambdaOperator& l);

/// L_X L_Y + ((w - l0) / (2 l0 - 1)) L_[X,Y].
DiffOperator example_pencil(const VectorField& x, const VectorField& y, const Rational& lambda0);

/// The same operator written as 1/2 (L_X L_Y + L_Y L_X) + 1/2 ((2w - 1)/(2 l0 - 1)) (L_X L_Y - L_Y L_X).
DiffOperator example_pencil_symmetrised(const VectorField& x, const VectorField& y, const Rational& lambda0);

/// Whether both operators restrict to the same operator at weight lambda.
bool pencil_agrees(const DiffOperator& a, const DiffOperator& b, const Rational& lambda,
                   EqualityPolicy policy = EqualityPolicy::SymbolicThenNumeric);

}  // namespace densops
