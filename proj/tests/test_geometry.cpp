#include <doctest.h>

#include <cmath>

#include "densops/error.hpp"
#include "densops/geometry.hpp"
#include "densops/parse.hpp"
#include "densops/verify.hpp"

using namespace densops;

namespace {

const Expr x1 = Expr::coord(0);
const Expr x2 = Expr::coord(1);

Expr q(long p, long d = 1) { return Expr(Rational(p, d)); }

ExprMatrix identity(int n) {
  ExprMatrix m(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Expr(1);
  return m;
}

SymbolTriple symbol_of(const ExprMatrix& s, std::vector<Expr> b, Expr c) {
  const int n = static_cast<int>(s.size());
  SymbolTriple st(n);
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) st.S.set(i, k, s[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
  st.B = std::move(b);
  st.C = std::move(c);
  return st;
}

bool all_zero(const Christoffel& g) {
  const int n = g.dimension();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m)
        if (!g(i, k, m).is_zero()) return false;
  return true;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("connection from a volume form") {
    CHECK(connection_from_volume(VolumeForm{Expr(1)}, 1).components[0].is_zero());
    CHECK(connection_from_volume(VolumeForm{exp(x1)}, 1).components[0] == Expr(-1));
    const Connection g = connection_from_volume(VolumeForm{Expr(1) + x1 * x1}, 1);
    CHECK(expr_equal(g.components[0], -q(2) * x1 / (Expr(1) + x1 * x1), EqualityPolicy::Symbolic));
    CHECK_THROWS_AS(connection_from_volume(VolumeForm{x1}, 1), DomainError);
  }

  TEST_CASE("metric validation") {
    CHECK_THROWS_AS(Metric(ExprMatrix{{Expr(1), x1}, {Expr(0), Expr(1)}}), Error);
    CHECK_THROWS_AS(Metric(ExprMatrix{{Expr(2)}}, ExprMatrix{{Expr(1)}}), Error);
    const Metric g(ExprMatrix{{Expr(2), x1}, {x1, Expr(3)}});
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        Expr s;
        for (int j = 0; j < 2; ++j) s += g.g()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * g.inverse()[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        CHECK(expr_equal(s, Expr(i == k ? 1 : 0), EqualityPolicy::Symbolic));
      }
  }

  TEST_CASE("Levi-Civita symbols") {
    CHECK(all_zero(levi_civita(Metric(identity(3)))));
    CHECK(levi_civita(Metric(ExprMatrix{{exp(q(2) * x1)}}))(0, 0, 0) == Expr(1));

    const Metric diag(ExprMatrix{{Expr(1) + x1 * x1, Expr()}, {Expr(), Expr(2) + x2 * x2 + x1}});
    const Christoffel lc = levi_civita(diag);
    const Expr half_log_det = q(1, 2) * log(diag.determinant());
    for (int i = 0; i < 2; ++i) {
      Expr trace;
      for (int k = 0; k < 2; ++k) trace += lc(k, i, k);
      CHECK(expr_equal(trace, diff(half_log_det, i), EqualityPolicy::Symbolic));
    }
  }

  TEST_CASE("metric volume connection is minus the Levi-Civita trace") {
    Generator g(61);
    for (int n = 1; n <= 3; ++n) {
      const Metric m(g.positive_matrix(n));
      const Connection from_metric = connection_from_metric(m);
      const Connection from_symbols = levi_civita(m).density_connection();
      for (int i = 0; i < n; ++i)
        CHECK(expr_equal(from_metric.components[static_cast<std::size_t>(i)],
                         from_symbols.components[static_cast<std::size_t>(i)]));
    }
  }

  TEST_CASE("connection transformation law") {
    const Connection gamma{{sin(x1), x1 * x2}};
    const Connection same = gamma_transform(gamma, ChartChange::identity(2));
    CHECK(same.components[0] == gamma.components[0]);
    CHECK(same.components[1] == gamma.components[1]);

    const ChartChange dbl({q(2) * x1}, {q(1, 2) * x1});
    CHECK(gamma_transform(Connection{{q(5, 3)}}, dbl).components[0] == q(5, 6));
  }

  TEST_CASE("cubic change of a flat connection") {
    // Oracle: rho = 1 pulled back to x' gives rho' = dx/dx' = 1/(1+x^2), so
    // gamma' = -d/dx' log rho' = (1/(1+x^2)) * 2x/(1+x^2).
    const std::vector<Expr> forward{x1 + q(1, 3) * x1 * x1 * x1};
    const Expr got = gamma_transform_source(Connection{{Expr()}}, forward).components[0];
    for (int k = 0; k < 8; ++k) {
      const double x = -0.9 + 0.25 * k;
      const double want = 2.0 * x / ((1.0 + x * x) * (1.0 + x * x));
      const double p[] = {x};
      CHECK(std::abs(eval(got, p) - want) <= 1e-9);
    }
  }

  TEST_CASE("connection law composes") {
    const ChartChange a({exp(x1), x2 + x1 * x1}, {log(x1), x2 - log(x1) * log(x1)});
    const ChartChange b({q(2) * x1 + x2, q(3) * x2}, {q(1, 2) * x1 - q(1, 6) * x2, q(1, 3) * x2});
    const Connection gamma{{cos(x1), sin(x2) * x1}};
    const Connection two_steps = gamma_transform(gamma_transform(gamma, a), b);
    const ChartChange ab = a.then(b);
    const Connection one_step = gamma_transform(gamma, ab);
    for (int i = 0; i < 2; ++i)
      for (const Point& p : ab.target_samples()) {
        const double l = eval(two_steps.components[static_cast<std::size_t>(i)], p);
        const double r = eval(one_step.components[static_cast<std::size_t>(i)], p);
        CHECK(std::abs(l - r) <= 1e-9 * (1 + std::abs(l)));
      }
  }

  TEST_CASE("Kaluza-Klein extraction") {
    const std::vector<Expr> gamma{sin(x1), x1 * x2 - 1, cos(x2)};
    const Connection got = kk_extract(symbol_of(identity(3), gamma, Expr()));
    for (std::size_t i = 0; i < 3; ++i) CHECK(got.components[i] == gamma[i]);

    CHECK(kk_extract(symbol_of({{exp(x1)}}, {Expr(1)}, Expr())).components[0] == exp(-x1));
    CHECK_THROWS_AS(kk_extract(symbol_of({{Expr()}}, {Expr(1)}, Expr())), InconsistentSystemError);
    CHECK_THROWS_AS(kk_extract(symbol_of({{Expr()}}, {Expr()}, Expr())), DegenerateSymbolError);

    // Rank one: B inside the range is consistent but still not uniquely solvable.
    const ExprMatrix rank_one{{Expr(1), Expr(1)}, {Expr(1), Expr(1)}};
    CHECK_THROWS_AS(kk_extract(symbol_of(rank_one, {Expr(1), Expr(2)}, Expr())), InconsistentSystemError);
    try {
      kk_extract(symbol_of(rank_one, {x1, x1}, Expr()));
      FAIL("expected a degenerate symbol");
    } catch (const InconsistentSystemError&) {
      FAIL("B lies in the range of S");
    } catch (const DegenerateSymbolError&) {
    }
  }

  TEST_CASE("Kaluza-Klein round trip") {
    Generator g(67);
    for (int t = 0; t < 6; ++t) {
      const int n = 1 + t % 3;
      const ExprMatrix s = g.positive_matrix(n);
      const Connection gamma = g.covector(n, 2);
      std::vector<Expr> b(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          b[static_cast<std::size_t>(i)] += s[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * gamma.components[static_cast<std::size_t>(k)];
      const Connection got = kk_extract(symbol_of(s, b, Expr()));
      for (int i = 0; i < n; ++i)
        CHECK(expr_equal(got.components[static_cast<std::size_t>(i)], gamma.components[static_cast<std::size_t>(i)],
                         EqualityPolicy::Symbolic));
    }
  }

  TEST_CASE("Brans-Dicke scalar") {
    const Connection gamma{{sin(x1), x2}};
    const ExprMatrix s{{Expr(2), x1}, {x1, Expr(3)}};
    std::vector<Expr> b{q(2) * sin(x1) + x1 * x2, x1 * sin(x1) + q(3) * x2};
    const Expr c = b[0] * gamma.components[0] + b[1] * gamma.components[1];
    CHECK(expr_equal(brans_dicke(symbol_of(s, b, c), gamma), Expr(), EqualityPolicy::Symbolic));
    CHECK(brans_dicke(symbol_of(s, b, cos(x2)), Connection{{Expr(), Expr()}}) == cos(x2));
  }

  TEST_CASE("Brans-Dicke scalar under a doubling of the coordinate") {
    const ChartChange dbl({q(2) * x1}, {q(1, 2) * x1});
    const Connection gamma{{cos(x1)}};
    const Expr s = Expr(2) + sin(x1);
    const DiffOperator op = build_canonical(symbol_of({{s}}, {s * gamma.components[0]}, x1 * x1 + Expr(1)));
    const SymbolTriple moved = extract_symbol(op_conjugate(op, dbl));
    const Expr before = brans_dicke(extract_symbol(op), gamma);
    const Expr after = brans_dicke(moved, gamma_transform(gamma, dbl));
    for (const Point& p : dbl.source_samples()) {
      const Point mapped = dbl.map_point(p);
      CHECK(std::abs(eval(before, p) - eval(after, mapped)) <= 1e-9);
    }
  }

  TEST_CASE("vector and scalar parts") {
    const ExprMatrix s{{Expr(2), x1}, {x1, Expr(3)}};
    const std::vector<Expr> b{sin(x1), x2};
    const CovariantParts flat = covariant_parts(symbol_of(s, b, cos(x1)), Christoffel(2));
    CHECK(flat.vector[0] == b[0]);
    CHECK(flat.vector[1] == b[1]);
    CHECK(flat.scalar == cos(x1));

    Christoffel chr(2);
    chr.set(0, 0, 1, sin(x2));
    chr.set(1, 1, 1, x1);
    chr.set(1, 0, 0, Expr(3));
    const Connection g = chr.density_connection();
    CHECK(g.components[0].is_zero());
    CHECK(g.components[1] == -sin(x2) - x1);
    std::vector<Expr> induced(2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < 2; ++k) induced[i] += s[i][k] * g.components[k];
    const CovariantParts parts = covariant_parts(symbol_of(s, induced, Expr(1)), chr);
    CHECK(expr_equal(parts.vector[0], Expr(), EqualityPolicy::Symbolic));
    CHECK(expr_equal(parts.vector[1], Expr(), EqualityPolicy::Symbolic));
  }

  TEST_CASE("operator conjugation") {
    const DiffOperator op = parse_operator("sin(x1)*d1*d2 + w*x2*d1 + w^2 + cos(x2)", Chart(2));
    CHECK(op_conjugate(op, ChartChange::identity(2)) == op);

    const ChartChange dbl({q(2) * x1}, {q(1, 2) * x1});
    const DiffOperator dd = op_compose(DiffOperator::partial(1, 0), DiffOperator::partial(1, 0));
    CHECK(extract_symbol(op_conjugate(dd, dbl)).S(0, 0) == Expr(4));

    const ChartChange curved({exp(x1), x2 + x1 * x1}, {log(x1), x2 - log(x1) * log(x1)});
    CHECK(op_conjugate(DiffOperator::weight(2), curved) == DiffOperator::weight(2));
    CHECK(op_conjugate(DiffOperator::weight(1), dbl) == DiffOperator::weight(1));
    CHECK_THROWS_AS(op_conjugate(parse_operator("d1^3", Chart(1)), dbl), OrderError);
  }

  TEST_CASE("conjugation commutes with pullback") {
    const ChartChange affine({q(2) * x1 + x2, q(3) * x2}, {q(1, 2) * x1 - q(1, 6) * x2, q(1, 3) * x2});
    const ChartChange curved({exp(x1), x2 + x1 * x1}, {log(x1), x2 - log(x1) * log(x1)});
    Generator g(71);
    for (int t = 0; t < 4; ++t) {
      const DiffOperator op = g.op(2, 2, 2, 3);
      Density d = Density::term(g.pick(weight_pool()), g.polynomial(2, 2));
      d.add(Rational(1, 3), g.trig_poly(2, 2));
      const Density l = density_pullback(op_apply(op, d), affine);
      const Density r = op_apply(op_conjugate(op, affine), density_pullback(d, affine));
      CHECK(l == r);
      const Density lc = density_pullback(op_apply(op, d), curved);
      const Density rc = op_apply(op_conjugate(op, curved), density_pullback(d, curved));
      for (const auto& [w, c] : (lc - rc).terms())
        for (const Point& p : curved.target_samples()) CHECK(std::abs(eval(c, p)) <= 1e-9);
    }
  }

  TEST_CASE("projective symbols") {
    CHECK(all_zero(pi_symbols(Christoffel(3)).symbols()));
    Christoffel one(1);
    one.set(0, 0, 0, sin(x1) * x1);
    CHECK(all_zero(pi_symbols(one).symbols()));

    Generator g(73);
    for (int n = 1; n <= 3; ++n) {
      const PiSymbols pi = pi_symbols(g.christoffel(n, 3));
      for (int m = 0; m < n; ++m) {
        Expr trace;
        for (int k = 0; k < n; ++k) trace += pi(k, k, m);
        CHECK(trace.is_zero());
      }
    }
    Christoffel not_trace_free(2);
    not_trace_free.set(0, 0, 0, Expr(1));
    CHECK_THROWS_AS(PiSymbols{not_trace_free}, Error);
  }

  TEST_CASE("projective equivalence") {
    Generator g(79);
    for (int n = 1; n <= 3; ++n) {
      const Christoffel a = g.christoffel(n, 2);
      const Connection t = g.covector(n, 2);
      const Christoffel b = projective_shift(a, t.components);
      const ProjectiveComparison cmp = projectively_equivalent(a, b);
      CHECK(cmp.equivalent);
      REQUIRE(cmp.shift.has_value());
      for (int k = 0; k < n; ++k) CHECK((*cmp.shift)[static_cast<std::size_t>(k)] == t.components[static_cast<std::size_t>(k)]);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int m = 0; m <= k; ++m) CHECK(pi_symbols(a)(i, k, m) == pi_symbols(b)(i, k, m));

      const ProjectiveComparison self = projectively_equivalent(a, a);
      CHECK(self.equivalent);
      REQUIRE(self.shift.has_value());
      for (const Expr& e : *self.shift) CHECK(e.is_zero());
    }

    Christoffel bent(2);
    bent.set(0, 1, 1, Expr(1));
    const ProjectiveComparison cmp = projectively_equivalent(Christoffel(2), bent);
    CHECK_FALSE(cmp.equivalent);
    CHECK_FALSE(cmp.shift.has_value());
    CHECK(pi_symbols(bent)(0, 1, 1) == Expr(1));
  }

  TEST_CASE("Thomas lift") {
    for (int n = 1; n <= 3; ++n) {
      const ExtendedChristoffel flat = thomas_lift(pi_symbols(Christoffel(n)));
      const int v = flat.vertical();
      const Expr c = q(-1, n + 1);
      CHECK(flat(v, v, v) == c);
      for (int i = 0; i < n; ++i) {
        CHECK(flat(i, v, v).is_zero());
        CHECK(flat(v, i, v).is_zero());
        for (int k = 0; k < n; ++k) {
          CHECK(flat(i, k, v) == (i == k ? c : Expr()));
          CHECK(flat(v, i, k).is_zero());
          for (int m = 0; m < n; ++m) CHECK(flat(i, k, m).is_zero());
        }
      }
    }

    Generator g(83);
    for (int n = 1; n <= 3; ++n) {
      const Christoffel a = g.christoffel(n, 2);
      const ExtendedChristoffel l1 = thomas_lift(pi_symbols(a));
      const ExtendedChristoffel l2 = thomas_lift(pi_symbols(projective_shift(a, g.covector(n, 2).components)));
      for (int x = 0; x <= n; ++x)
        for (int y = 0; y <= n; ++y)
          for (int z = 0; z <= n; ++z) {
            CHECK(l1(x, y, z) == l2(x, y, z));
            CHECK(l1(x, y, z) == l1(x, z, y));
          }
    }
  }

  TEST_CASE("Thomas lift vertical block") {
    // n = 2 with a single nonzero pair Pi^1_{12} = Pi^1_{21} = -Pi^2_{22} = x2, which is trace-free.
    Christoffel c(2);
    c.set(0, 0, 1, x2);
    c.set(1, 1, 1, -x2);
    const ExtendedChristoffel l = thomas_lift(PiSymbols(c));
    // (d_r Pi^r_{km} - Pi^r_{sk} Pi^s_{rm}) / 3 computed by hand.
    CHECK(l(2, 0, 0) == Expr());
    CHECK(l(2, 0, 1) == Expr());
    CHECK(l(2, 1, 1) == q(-1, 3) - q(2, 3) * x2 * x2);
  }

  TEST_CASE("index checks") {
    ExtendedChristoffel e(2);
    CHECK_THROWS_AS(e.set_base(2, 0, 0, Expr(1)), IndexError);
    CHECK_THROWS_AS(e.set_vertical(0, 3, Expr(1)), IndexError);
  }
}
