#include <doctest.h>

#include <cmath>
#include <numbers>

#include "densops/error.hpp"
#include "densops/integrate.hpp"
#include "densops/parse.hpp"
#include "densops/verify.hpp"

using namespace densops;

namespace {

const Expr x1 = Expr::coord(0);
const Expr x2 = Expr::coord(1);
constexpr double pi = std::numbers::pi;

}  // namespace

TEST_SUITE("integrate") {
  TEST_CASE("exact torus integrals") {
    const IntegralValue s2 = integrate_torus(sin(x1) * sin(x1), 1);
    REQUIRE(s2.exact());
    CHECK(*s2.exact_factor == Rational(1, 2));
    CHECK(s2.value == doctest::Approx(pi).epsilon(1e-15));

    const IntegralValue s1 = integrate_torus(sin(x1), 1);
    REQUIRE(s1.exact());
    CHECK(s1.value == 0.0);

    const IntegralValue one = integrate_torus(Expr(1), 2);
    REQUIRE(one.exact());
    CHECK(one.value == doctest::Approx(4 * pi * pi).epsilon(1e-15));

    CHECK(*torus_mean_exact(sin(x1) * sin(x1) * cos(x2) * cos(x2)) == Rational(1, 4));
    CHECK(*torus_mean_exact(pow(cos(x1), 4)) == Rational(3, 8));
    CHECK_FALSE(torus_mean_exact(x1).has_value());
  }

  TEST_CASE("quadrature path") {
    const IntegralValue e = integrate_torus(exp(sin(x1)), 1);
    CHECK_FALSE(e.exact());
    // 2 pi I_0(1)
    CHECK(e.value == doctest::Approx(2 * pi * 1.2660658777520082).epsilon(1e-12));
    CHECK(torus_quadrature(cos(x1) * cos(x1) * sin(x2) * sin(x2), 2) == doctest::Approx(pi * pi).epsilon(1e-12));
  }

  TEST_CASE("rejected integrands") {
    CHECK_THROWS_AS(integrate_torus(log(Expr(2) + sin(x1)), 1), IntegrationError);
    CHECK_THROWS_AS(integrate_torus(inverse(x1), 1), IntegrationError);
    CHECK_THROWS_AS(integrate_torus(x1, 1), IntegrationError);
  }

  TEST_CASE("Gauss-Legendre on a box") {
    const auto [nodes, weights] = gauss_legendre(5);
    double total = 0;
    for (double w : weights) total += w;
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(nodes.size() == 5);
    const auto box = IntegrationDomain::box({{0.0, 1.0}, {-1.0, 2.0}}, 8);
    CHECK(integrate_box(x1 * x1 * x2, box) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(integrate(exp(x1), IntegrationDomain::box({{0.0, 1.0}})).value ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  }

  TEST_CASE("exact and quadrature paths agree") {
    Generator g(89);
    for (int t = 0; t < 20; ++t) {
      const int n = 1 + t % 2;
      const Expr e = g.trig_poly(n, 6, 4);
      const IntegralValue v = integrate_torus(e, n);
      REQUIRE(v.exact());
      CHECK(std::abs(v.value - torus_quadrature(e, n)) <= 1e-10);
    }
  }
}

TEST_SUITE("verify") {
  TEST_CASE("numeric adjointness") {
    RandomSuiteConfig cfg;
    cfg.trials = 10;
    const SuiteReport d = check_adjoint_numeric(DiffOperator::partial(1, 0), cfg);
    CHECK(d.passed());
    CHECK(d.max_residual == 0.0);
    const SuiteReport w = check_adjoint_numeric(DiffOperator::weight(2), cfg);
    CHECK(w.passed());
    CHECK(w.max_residual == 0.0);

    Generator g(97);
    const DiffOperator canon = build_canonical(g.symbol(2, 2));
    CHECK(check_adjoint_numeric(canon, cfg).passed());

    // Holds for any operator paired against its own adjoint.
    const DiffOperator not_adjoint = DiffOperator::partial(1, 0) + DiffOperator::multiplication(1, sin(x1));
    CHECK(check_adjoint_numeric(not_adjoint, cfg).passed());
  }

  TEST_CASE("named suites") {
    RandomSuiteConfig cfg;
    cfg.seed = 42;
    cfg.trials = 50;
    CHECK(run_suite("adjoint-involution", cfg).passed());
    cfg.trials = 10;
    CHECK(run_suite("theorem-uniqueness", cfg).passed());
    CHECK_THROWS_AS(run_suite("unknown", cfg), Error);
    CHECK(run_suites("all", cfg).size() == suite_names().size());
  }

  TEST_CASE("reports are deterministic") {
    RandomSuiteConfig cfg;
    cfg.seed = 1234;
    cfg.trials = 8;
    for (const auto& name : suite_names()) CHECK(to_text(run_suite(name, cfg)) == to_text(run_suite(name, cfg)));
  }

  TEST_CASE("trial seeds") {
    CHECK(trial_seed(42, "a", 0) == trial_seed(42, "a", 0));
    CHECK(trial_seed(42, "a", 0) != trial_seed(42, "a", 1));
    CHECK(trial_seed(42, "a", 0) != trial_seed(42, "b", 0));
    CHECK(trial_seed(42, "a", 0) != trial_seed(43, "a", 0));
    Generator a(5), b(5);
    for (int i = 0; i < 20; ++i) CHECK(a.integer(-7, 7) == b.integer(-7, 7));
  }

  TEST_CASE("report text") {
    SuiteReport r{"demo", 3, 2, 0.25, {}};
    CHECK(to_text(r) == "PASS demo seed=3 trials=2 max_residual=2.500e-01 failures=0\n");
    r.failures.push_back({1, "x", "1", "2"});
    CHECK(to_text(r) ==
          "FAIL demo seed=3 trials=2 max_residual=2.500e-01 failures=1\n  trial 1: x\n    lhs: 1\n    rhs: 2\n");
  }
}
