#include <doctest.h>

#include "densops/error.hpp"
#include "densops/parse.hpp"
#include "densops/verify.hpp"

using namespace densops;

namespace {

DiffOperator P(const char* text, int n = 1) { return parse_operator(text, Chart(n)); }

const Expr x1 = Expr::coord(0);

}  // namespace

TEST_SUITE("parse") {
  TEST_CASE("operator with labelled symbol terms") {
    const SymbolTriple st = extract_symbol(P("d1*d1 + 2*w*sin(x1)*d1 + w^2"));
    CHECK(st.S(0, 0) == Expr(1));
    CHECK(st.B[0] == sin(x1));
    CHECK(st.C == Expr(1));
  }

  TEST_CASE("adjoint and composition") {
    CHECK(P("adj(d1)") == -DiffOperator::partial(1, 0));
    CHECK(to_string(P("d1 @ x1")) == "1 + x1*d1");
    CHECK(to_string(P("adj(w)")) == "1 - w");
    CHECK(P("d1*x1") == P("x1*d1"));
    CHECK(P("(d1 + w) @ (x1*d1)") == op_compose(P("d1 + w"), P("x1*d1")));
    CHECK(P("adj(d1 @ x1)") == op_adjoint(P("d1 @ x1")));
  }

  TEST_CASE("expression syntax") {
    const Chart c(2);
    CHECK(parse_expr("x1^-1", c) == inverse(x1));
    CHECK(parse_expr("x1^(-1)", c) == inverse(x1));
    CHECK(parse_expr("-x1^2", c) == -(x1 * x1));
    CHECK(parse_expr("1/2*x1 + 3/4", c) == Expr(Rational(1, 2)) * x1 + Expr(Rational(3, 4)));
    CHECK(parse_expr("x1/(1 + x1^2)", c) == x1 * inverse(Expr(1) + x1 * x1));
    CHECK(parse_expr("exp(log(x2))", c) == Expr::coord(1));
    CHECK(parse_expr("2^3", c) == Expr(8));
  }

  TEST_CASE("custom coordinate names") {
    const Chart c(std::vector<std::string>{"u", "v"});
    CHECK(parse_operator("u*d2 + v", c) == parse_operator("x1*d2 + x2", Chart(2)));
  }

  TEST_CASE("positioned syntax errors") {
    try {
      P("d1 +\n  * x1");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(P("sin(x1"), ParseError);
    CHECK_THROWS_AS(P("a(x1)*d1"), ParseError);
    CHECK_THROWS_AS(P("x1 d1"), ParseError);
    CHECK_THROWS_AS(P("x1^x1"), ParseError);
    CHECK_THROWS_AS(P("x1/d1"), ParseError);
    CHECK_THROWS_AS(P("sin(d1)"), ParseError);
    CHECK_THROWS_AS(P(""), ParseError);
    CHECK_THROWS_AS(parse_expr("w + 1", Chart(1)), ParseError);
  }

  TEST_CASE("unknown indices") {
    CHECK_THROWS_AS(P("x2*d1"), IndexError);
    CHECK_THROWS_AS(P("d2"), IndexError);
    CHECK_THROWS_AS(P("d0"), IndexError);
  }

  TEST_CASE("printing round-trips on normal-ordered operators") {
    for (int n = 1; n <= 3; ++n) {
      Generator g(100 + static_cast<std::uint64_t>(n));
      const Chart c(n);
      for (int t = 0; t < 40; ++t) {
        const DiffOperator op = g.op(n, 3, 4);
        const std::string text = to_string(op);
        const DiffOperator back = parse_operator(text, c);
        CHECK(back == op);
        CHECK(to_string(back) == text);
      }
    }
    CHECK(to_string(DiffOperator(2)) == "0");
    CHECK(P("0") == DiffOperator(1));
  }

  TEST_CASE("terms print in order of total degree") {
    CHECK(to_string(P("w^2 + d1 + 3 + w*d1 + d1^2")) == "3 + d1 + d1^2 + d1*w + w^2");
    CHECK(to_string(parse_operator("d2 + d1 + d1*d2 + d2^2 + d1^2", Chart(2))) ==
          "d1 + d2 + d1^2 + d1*d2 + d2^2");
  }
}
