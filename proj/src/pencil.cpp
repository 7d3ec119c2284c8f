#include "densops/pencil.hpp"

#include "densops/error.hpp"

namespace densops {

namespace {

void require_forbidden_free(const Rational& lambda0) {
  if (is_forbidden_weight(lambda0))
    throw ForbiddenWeightError("no unique self-adjoint pencil through an operator of weight " + lambda0.to_string() +
                               " (weights 0, 1/2, 1 are excluded)");
}

void require_dimension(const VectorField& x, const VectorField& y) {
  if (x.dimension() != y.dimension()) throw Error("vector fields on charts of different dimension");
}

}  // namespace

LambdaOperator::LambdaOperator(DiffOperator op, Rational lambda0) : op_(std::move(op)), lambda0_(std::move(lambda0)) {
  if (op_.weight_degree() > 0) throw OrderError("a weight-l0 operator must not contain w");
  if (op_.order() > 2) throw OrderError("pencil reconstruction needs an operator of order <= 2");
}

bool is_forbidden_weight(const Rational& lambda) {
  return lambda.is_zero() || lambda == Rational(1, 2) || lambda == Rational(1);
}

DiffOperator lie_lift(const VectorField& x) {
  const int n = x.dimension();
  DiffOperator op(n);
  Expr div;
  for (int i = 0; i < n; ++i) {
    const Expr& xi = x.components[static_cast<std::size_t>(i)];
    op.add_term(key_of(n, {i}), xi);
    div += diff(xi, i);
  }
  op.add_term(key_of(n, {}, 1), div);
  return op;
}

DiffOperator horizontal_lift(const VectorField& x, const Connection& gamma) {
  const int n = x.dimension();
  if (gamma.dimension() != n) throw Error("connection and vector field on charts of different dimension");
  DiffOperator op(n);
  Expr vertical;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    op.add_term(key_of(n, {i}), x.components[ui]);
    vertical += gamma.components[ui] * x.components[ui];
  }
  op.add_term(key_of(n, {}, 1), vertical);
  return op;
}

VectorField commutator(const VectorField& x, const VectorField& y) {
  require_dimension(x, y);
  const int n = x.dimension();
  VectorField out{std::vector<Expr>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    Expr c;
    for (int j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      c += x.components[uj] * diff(y.components[static_cast<std::size_t>(i)], j) -
           y.components[uj] * diff(x.components[static_cast<std::size_t>(i)], j);
    }
    out.components[static_cast<std::size_t>(i)] = c;
  }
  return out;
}

SymbolTriple pencil_symbol(const LambdaOperator& l) {
  const Rational& l0 = l.lambda0();
  require_forbidden_free(l0);
  const DiffOperator& op = l.op();
  const int n = op.dimension();
  SymbolTriple st(n);
  const Rational half(1, 2);
  for (int i = 0; i < n; ++i) {
    st.S.set(i, i, op.coefficient(key_of(n, {i, i})));
    for (int k = i + 1; k < n; ++k) st.S.set(i, k, Expr(half) * op.coefficient(key_of(n, {i, k})));
  }
  const Rational b_scale = (Rational(2) * l0 - Rational(1)).inverse();
  const Rational c_scale = (l0 * (l0 - Rational(1))).inverse();
  const Rational d_scale = ((l0 - Rational(1)) * (Rational(2) * l0 - Rational(1))).inverse();
  Expr div_a;  // d_i A^i - d_i d_k A^{ki}
  for (int i = 0; i < n; ++i) {
    Expr div_s;
    for (int k = 0; k < n; ++k) div_s += diff(st.S(k, i), k);
    const Expr ai = op.coefficient(key_of(n, {i}));
    st.B[static_cast<std::size_t>(i)] = Expr(b_scale) * (ai - div_s);
    div_a += diff(ai - div_s, i);
  }
  st.C = Expr(c_scale) * op.coefficient(key_of(n, {})) - Expr(d_scale) * div_a;
  return st;
}

DiffOperator canonical_pencil(const LambdaOperator& l) { return build_canonical(pencil_symbol(l)); }

DiffOperator example_pencil(const VectorField& x, const VectorField& y, const Rational& lambda0) {
  require_dimension(x, y);
  require_forbidden_free(lambda0);
  const int n = x.dimension();
  const Rational scale = (Rational(2) * lambda0 - Rational(1)).inverse();
  DiffOperator factor(n);  // (w - l0) / (2 l0 - 1)
  factor.add_term(key_of(n, {}, 1), Expr(scale));
  factor.add_term(key_of(n, {}), Expr(-lambda0 * scale));
  return op_compose(lie_lift(x), lie_lift(y)) + op_compose(factor, lie_lift(commutator(x, y)));
}

DiffOperator example_pencil_symmetrised(const VectorField& x, const VectorField& y, const Rational& lambda0) {
  require_dimension(x, y);
  require_forbidden_free(lambda0);
  const int n = x.dimension();
  const DiffOperator lx = lie_lift(x);
  const DiffOperator ly = lie_lift(y);
  const DiffOperator xy = op_compose(lx, ly);
  const DiffOperator yx = op_compose(ly, lx);
  const Rational scale = Rational(1, 2) * (Rational(2) * lambda0 - Rational(1)).inverse();
  DiffOperator factor(n);  // (2w - 1) / (2 (2 l0 - 1))
  factor.add_term(key_of(n, {}, 1), Expr(Rational(2) * scale));
  factor.add_term(key_of(n, {}), Expr(-scale));
  return Expr(Rational(1, 2)) * (xy + yx) + op_compose(factor, xy - yx);
}

bool pencil_agrees(const DiffOperator& a, const DiffOperator& b, const Rational& lambda, EqualityPolicy policy) {
  return op_equal(restrict(a, lambda), restrict(b, lambda), policy);
}

}  // namespace densops
