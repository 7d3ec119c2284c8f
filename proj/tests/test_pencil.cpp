#include <doctest.h>

#include "densops/error.hpp"
#include "densops/parse.hpp"
#include "densops/pencil.hpp"
#include "densops/verify.hpp"

using namespace densops;

namespace {

const Expr x1 = Expr::coord(0);
const Expr x2 = Expr::coord(1);

DiffOperator P(const char* text, int n = 1) { return parse_operator(text, Chart(n)); }

}  // namespace

TEST_SUITE("pencil") {
  TEST_CASE("Lie derivative lift") {
    CHECK(lie_lift(VectorField{{sin(x1)}}) == P("sin(x1)*d1 + cos(x1)*w"));
    CHECK(lie_lift(VectorField{{Expr(), Expr()}}).is_zero());
    const VectorField x{{x1 * x2, sin(x2)}};
    const Rational l(3, 2);
    const Expr s = cos(x1) + x2;
    Expr want = Expr(l) * (diff(x.components[0], 0) + diff(x.components[1], 1)) * s;
    for (int i = 0; i < 2; ++i) want += x.components[static_cast<std::size_t>(i)] * diff(s, i);
    CHECK(op_apply(lie_lift(x), Density::term(l, s)) == Density::term(l, want));
  }

  TEST_CASE("horizontal lift") {
    const VectorField x{{x1 * x2, sin(x2)}};
    CHECK(horizontal_lift(x, Connection{{Expr(), Expr()}}) ==
          x1 * x2 * DiffOperator::partial(2, 0) + sin(x2) * DiffOperator::partial(2, 1));
    const Connection gamma{{cos(x1), x1}};
    const Expr gx = gamma.components[0] * x.components[0] + gamma.components[1] * x.components[1];
    const Expr div = diff(x.components[0], 0) + diff(x.components[1], 1);
    CHECK(divergence_hat(horizontal_lift(x, gamma)) == div - gx);
    CHECK(lie_lift(x) - horizontal_lift(x, gamma) == (div - gx) * DiffOperator::weight(2));
  }

  TEST_CASE("commutator") {
    CHECK(commutator(VectorField{{Expr(1)}}, VectorField{{x1}}).components[0] == Expr(1));
    const VectorField x{{sin(x1) * x2, cos(x2)}};
    for (const auto& c : commutator(x, x).components) CHECK(c.is_zero());
    CHECK(commutator(VectorField{{sin(x1)}}, VectorField{{cos(x1)}}).components[0] == Expr(-1));
  }

  TEST_CASE("pencil through d^2 at weight 2") {
    const DiffOperator canon = canonical_pencil(LambdaOperator(P("d1^2"), Rational(2)));
    CHECK(canon == P("d1^2"));
  }

  TEST_CASE("pencil through d^2 + a d at weight 2") {
    const Expr a = sin(x1) * x1;
    const LambdaOperator l(P("d1^2") + a * DiffOperator::partial(1, 0), Rational(2));
    const SymbolTriple st = pencil_symbol(l);
    CHECK(st.B[0] == Expr(Rational(1, 3)) * a);
    CHECK(st.C == Expr(Rational(-1, 3)) * diff(a, 0));
    CHECK(restrict(canonical_pencil(l), Rational(2)) == l.op());
    CHECK(is_self_adjoint(canonical_pencil(l), EqualityPolicy::Symbolic));
  }

  TEST_CASE("reconstruction recovers the canonical pencil") {
    Generator g(43);
    for (int t = 0; t < 10; ++t) {
      const int n = 1 + t % 2;
      const SymbolTriple st = g.symbol(n, 3);
      const DiffOperator canon = build_canonical(st);
      for (const Rational& l0 : {Rational(2), Rational(-1), Rational(3, 2), Rational(-2, 3)}) {
        const LambdaOperator l(restrict(canon, l0), l0);
        CHECK(canonical_pencil(l) == canon);
        CHECK(pencil_agrees(canonical_pencil(l), canon, l0));
      }
    }
  }

  TEST_CASE("forbidden weights") {
    for (const Rational& l0 : {Rational(0), Rational(1, 2), Rational(1)}) {
      CHECK(is_forbidden_weight(l0));
      CHECK_THROWS_AS(pencil_symbol(LambdaOperator(P("d1^2 + x1*d1"), l0)), ForbiddenWeightError);
      CHECK_THROWS_AS(example_pencil(VectorField{{Expr(1)}}, VectorField{{x1}}, l0), ForbiddenWeightError);
    }
    CHECK_FALSE(is_forbidden_weight(Rational(2)));
  }

  TEST_CASE("lambda operators reject w and order above two") {
    CHECK_THROWS_AS(LambdaOperator(P("d1^2 + w"), Rational(2)), OrderError);
    CHECK_THROWS_AS(LambdaOperator(P("d1^3"), Rational(2)), OrderError);
  }

  TEST_CASE("Lie derivative example") {
    const VectorField x{{Expr(1)}};
    const VectorField y{{x1}};
    const Rational l0(2);
    const DiffOperator e = example_pencil(x, y, l0);
    const DiffOperator lx = lie_lift(x);
    const DiffOperator ly = lie_lift(y);
    const DiffOperator want =
        op_compose(lx, ly) + op_compose(Expr(Rational(1, 3)) * (DiffOperator::weight(1) - DiffOperator::multiplication(1, Expr(2))), lx);
    CHECK(e == want);
    CHECK(op_adjoint(e) == e);
    CHECK(e == example_pencil_symmetrised(x, y, l0));
    CHECK(example_pencil(x, x, l0) == op_compose(lx, lx));
  }

  TEST_CASE("example equals the reconstructed pencil") {
    Generator g(47);
    for (int t = 0; t < 10; ++t) {
      const int n = 1 + t % 2;
      const VectorField x = g.vector_field(n, 2);
      const VectorField y = g.vector_field(n, 2);
      const Rational l0 = t % 2 == 0 ? Rational(3) : Rational(-1, 2);
      const DiffOperator e = example_pencil(x, y, l0);
      const DiffOperator l = restrict(op_compose(lie_lift(x), lie_lift(y)), l0);
      CHECK(restrict(e, l0) == l);
      CHECK(canonical_pencil(LambdaOperator(l, l0)) == e);
      CHECK(e == example_pencil_symmetrised(x, y, l0));
    }
  }

  TEST_CASE("Lie algebra homomorphism") {
    Generator g(53);
    for (int t = 0; t < 10; ++t) {
      const int n = 1 + t % 3;
      const VectorField x = g.vector_field(n, 3);
      const VectorField y = g.vector_field(n, 3);
      const DiffOperator lx = lie_lift(x);
      const DiffOperator ly = lie_lift(y);
      CHECK(op_compose(lx, ly) - op_compose(ly, lx) == lie_lift(commutator(x, y)));
      CHECK(divergence_hat(lx).is_zero());
      CHECK(op_adjoint(lx) == -lx);
    }
  }

  TEST_CASE("pencil agreement") {
    const DiffOperator a = P("d1^2");
    CHECK(pencil_agrees(a, a, Rational(5, 7)));
    CHECK(pencil_agrees(a, a + DiffOperator::weight(1), Rational(0)));
    CHECK_FALSE(pencil_agrees(a, a + DiffOperator::weight(1), Rational(1)));
  }
}
