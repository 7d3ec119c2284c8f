#include <doctest.h>

#include "densops/error.hpp"
#include "densops/operator.hpp"
#include "densops/parse.hpp"
#include "densops/verify.hpp"

using namespace densops;

namespace {

const Expr x1 = Expr::coord(0);
const Expr x2 = Expr::coord(1);

DiffOperator P(const char* text, int n = 1) { return parse_operator(text, Chart(n)); }

DiffOperator d(int n, int i) { return DiffOperator::partial(n, i); }
DiffOperator w(int n) { return DiffOperator::weight(n); }
DiffOperator mul(int n, const Expr& c) { return DiffOperator::multiplication(n, c); }

}  // namespace

TEST_SUITE("operator") {
  TEST_CASE("application examples") {
    const Rational l(2, 3);
    const Density s = Density::term(l, sin(x1));
    CHECK(op_apply(w(1), s) == Density::term(l, Expr(l) * sin(x1)));
    CHECK(op_apply(op_compose(d(1, 0), d(1, 0)), Density::term(l, x1 * x1 * x1)) == Density::term(l, Expr(6) * x1));
    CHECK(op_apply(sin(x1) * op_compose(w(1), w(1)), Density::term(Rational(2), Expr(1))) ==
          Density::term(Rational(2), Expr(4) * sin(x1)));
  }

  TEST_CASE("composition examples") {
    CHECK(op_compose(d(1, 0), mul(1, x1)) == x1 * d(1, 0) + mul(1, Expr(1)));
    const Expr f = sin(x1) * x2;
    CHECK(op_compose(w(2), mul(2, f)) == f * w(2));
    CHECK(op_compose(d(1, 0), sin(x1) * d(1, 0)) == sin(x1) * op_compose(d(1, 0), d(1, 0)) + cos(x1) * d(1, 0));
  }

  TEST_CASE("adjoint examples") {
    CHECK(op_adjoint(d(1, 0)) == -d(1, 0));
    CHECK(op_adjoint(w(1)) == mul(1, Expr(1)) - w(1));
    CHECK(op_adjoint(mul(2, x1 * x2)) == mul(2, x1 * x2));
    const Expr f = sin(x1) * x1;
    CHECK(op_adjoint(f * d(1, 0)) == -(f * d(1, 0)) - mul(1, diff(f, 0)));
  }

  TEST_CASE("restriction") {
    CHECK(restrict(w(1), Rational(0)).is_zero());
    CHECK(restrict(op_compose(w(1), w(1)) - w(1), Rational(1)).is_zero());
    const DiffOperator pencil = P("(w^2 + 1)*x1*d1^2 + (2*w - 1)*sin(x1)*d1 + w*(w - 1)*cos(x1)");
    CHECK(restrict(pencil, Rational(3)) == P("10*x1*d1^2 + 5*sin(x1)*d1 + 6*cos(x1)"));
    Generator g(3);
    for (int t = 0; t < 10; ++t) {
      const DiffOperator op = g.op(2, 3, 3);
      const Rational l = g.pick(weight_pool());
      const Density s = Density::term(l, g.trig_poly(2, 3));
      CHECK(op_apply(restrict(op, l), s) == op_apply(op, s));
      CHECK(restrict(op, l).weight_degree() == 0);
    }
  }

  TEST_CASE("self-adjointness examples") {
    Generator g(17);
    const SymbolTriple st = g.symbol(2, 3);
    CHECK(is_self_adjoint(build_canonical(st)));
    CHECK_FALSE(is_self_adjoint(d(1, 0)));
    CHECK_FALSE(is_self_adjoint(w(1) - mul(1, Expr(Rational(1, 2)))));
    CHECK(is_self_adjoint(mul(1, sin(x1))));
  }

  TEST_CASE("divergence examples") {
    const Expr x = sin(x1) * x2;
    const Expr y = x1 * x1 + cos(x2);
    DiffOperator k = x * d(2, 0) + y * d(2, 1) + (diff(x, 0) + diff(y, 1)) * w(2);
    CHECK(divergence_hat(k).is_zero());
    CHECK(divergence_hat(w(1)) == Expr(-1));
    CHECK(divergence_hat(x1 * d(1, 0)) == Expr(1));
    CHECK_THROWS_AS(divergence_hat(op_compose(d(1, 0), d(1, 0))), OrderError);
    CHECK_THROWS_AS(divergence_hat(mul(1, x1)), OrderError);
  }

  TEST_CASE("divergence-free exactly when anti-self-adjoint") {
    Generator g(19);
    for (int t = 0; t < 20; ++t) {
      DiffOperator k(2);
      for (int i = 0; i < 2; ++i) k.add_term(key_of(2, {i}), g.trig_poly(2, 3));
      k.add_term(key_of(2, {}, 1), g.trig_poly(2, 3));
      const bool anti = op_adjoint(k) == -k;
      CHECK(anti == divergence_hat(k).is_zero());
      const DiffOperator fixed = k + divergence_hat(k) * w(2);
      CHECK(divergence_hat(fixed).is_zero());
      CHECK(op_adjoint(fixed) == -fixed);
    }
  }

  TEST_CASE("symbol extraction") {
    const SymbolTriple lap = extract_symbol(P("d1^2 + d2^2", 2));
    CHECK(lap.S(0, 0) == Expr(1));
    CHECK(lap.S(1, 1) == Expr(1));
    CHECK(lap.S(0, 1).is_zero());
    CHECK(lap.B[0].is_zero());
    CHECK(lap.C.is_zero());
    const SymbolTriple c = extract_symbol(P("w @ (w - 1) @ cos(x1)"));
    CHECK(c.S(0, 0).is_zero());
    CHECK(c.B[0].is_zero());
    CHECK(c.C == cos(x1));
    const SymbolTriple mixed = extract_symbol(P("4*x1*d1*d2 + 6*w*d2", 2));
    CHECK(mixed.S(0, 1) == Expr(2) * x1);
    CHECK(mixed.B[1] == Expr(3));
    CHECK_THROWS_AS(extract_symbol(P("d1^3")), OrderError);
  }

  TEST_CASE("canonical operator") {
    SymbolTriple flat(1);
    flat.S.set(0, 0, Expr(1));
    CHECK(build_canonical(flat) == op_compose(d(1, 0), d(1, 0)));
    SymbolTriple c(1);
    c.C = Expr(1);
    CHECK(build_canonical(c) == op_compose(w(1), w(1)) - w(1));
    Generator g(29);
    for (int t = 0; t < 10; ++t) {
      const SymbolTriple st = g.symbol(1 + t % 3, 2);
      const DiffOperator op = build_canonical(st);
      CHECK(symbol_equal(extract_symbol(op), st, EqualityPolicy::Symbolic));
      CHECK(op_apply(op, Density::term(Rational(0), Expr(1))).is_zero());
    }
  }

  TEST_CASE("adjoint algebra on random operators") {
    Generator g(37);
    for (int t = 0; t < 20; ++t) {
      const int n = 1 + t % 3;
      const DiffOperator a = g.op(n, 3, 3);
      const DiffOperator b = g.op(n, 2, 3);
      CHECK(op_adjoint(op_adjoint(a)) == a);
      CHECK(op_adjoint(op_compose(a, b)) == op_compose(op_adjoint(b), op_adjoint(a)));
      const Density s = Density::term(g.pick(weight_pool()), g.trig_poly(n, 3));
      CHECK(op_apply(op_compose(a, b), s) == op_apply(a, op_apply(b, s)));
    }
  }

  TEST_CASE("operators never change weight") {
    Generator g(41);
    const DiffOperator a = g.op(2, 3, 3);
    const Density s = Density::term(Rational(1, 3), g.trig_poly(2, 3));
    const Density r = op_apply(a, s);
    for (const auto& [weight, coeff] : r.terms()) CHECK(weight == Rational(1, 3));
  }
}
