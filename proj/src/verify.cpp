#include "densops/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "densops/error.hpp"

namespace densops {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t u(int i) { return static_cast<std::size_t>(i); }

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::string_view stream, int trial) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stream) h = (h ^ c) * 0x100000001b3ULL;
  return splitmix(splitmix(seed ^ h) + static_cast<std::uint64_t>(trial));
}

long Generator::integer(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng_() % span);
}

Rational Generator::rational(long max_num, long max_den) {
  long p = integer(1, max_num);
  if (integer(0, 1) == 1) p = -p;
  return Rational(p, integer(1, max_den));
}

Expr Generator::trig_poly(int n, int degree, int max_terms) {
  Expr out;
  const long terms = integer(1, max_terms);
  for (long t = 0; t < terms; ++t) {
    Expr m(rational());
    const long d = integer(0, degree);
    for (long k = 0; k < d; ++k) {
      const Expr x = Expr::coord(static_cast<int>(integer(0, n - 1)));
      m *= integer(0, 1) == 0 ? sin(x) : cos(x);
    }
    out += m;
  }
  return out;
}

Expr Generator::polynomial(int n, int degree, int max_terms) {
  Expr out;
  const long terms = integer(1, max_terms);
  for (long t = 0; t < terms; ++t) {
    Expr m(rational());
    const long d = integer(0, degree);
    for (long k = 0; k < d; ++k) m *= Expr::coord(static_cast<int>(integer(0, n - 1)));
    out += m;
  }
  return out;
}

DiffOperator Generator::op(int n, int max_order, int degree, int max_terms) {
  DiffOperator out(n);
  const long terms = integer(1, max_terms);
  for (long t = 0; t < terms; ++t) {
    const long r = integer(0, max_order);
    const long k = integer(0, r);
    OpKey key{std::vector<int>(u(n), 0), static_cast<int>(k)};
    for (long j = 0; j < r - k; ++j) ++key.alpha[static_cast<std::size_t>(integer(0, n - 1))];
    out.add_term(key, trig_poly(n, degree, 2));
  }
  return out;
}

SymbolTriple Generator::symbol(int n, int degree) {
  SymbolTriple st(n);
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) st.S.set(i, k, trig_poly(n, degree, 2));
  for (int i = 0; i < n; ++i) st.B[u(i)] = trig_poly(n, degree, 2);
  st.C = trig_poly(n, degree, 2);
  return st;
}

VectorField Generator::vector_field(int n, int degree) {
  VectorField x{std::vector<Expr>(u(n))};
  for (auto& c : x.components) c = trig_poly(n, degree, 2);
  return x;
}

Connection Generator::covector(int n, int degree) {
  Connection g{std::vector<Expr>(u(n))};
  for (auto& c : g.components) c = trig_poly(n, degree, 2);
  return g;
}

Christoffel Generator::christoffel(int n, int degree) {
  Christoffel g(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m <= k; ++m) g.set(i, k, m, trig_poly(n, degree, 2));
  return g;
}

ExprMatrix Generator::positive_matrix(int n) {
  ExprMatrix l(u(n), std::vector<Expr>(u(n)));
  for (int i = 0; i < n; ++i) {
    l[u(i)][u(i)] = Expr(integer(1, 3));
    for (int k = 0; k < i; ++k)
      l[u(i)][u(k)] = Expr(rational()) + Expr(rational()) * Expr::coord(static_cast<int>(integer(0, n - 1)));
  }
  ExprMatrix s(u(n), std::vector<Expr>(u(n)));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      Expr v = i == k ? Expr(1) : Expr();
      for (int j = 0; j < n; ++j) v += l[u(i)][u(j)] * l[u(k)][u(j)];
      s[u(i)][u(k)] = v;
    }
  }
  return s;
}

const std::vector<Rational>& weight_pool() {
  static const std::vector<Rational> pool = {Rational(0), Rational(1), Rational(1, 2), Rational(-1),
                                             Rational(2), Rational(1, 3), Rational(3, 2)};
  return pool;
}

SuiteReport check_adjoint_numeric(const DiffOperator& op, const RandomSuiteConfig& cfg) {
  const int n = op.dimension();
  const auto domain = IntegrationDomain::torus(n);
  const DiffOperator adj = op_adjoint(op);
  SuiteReport r{"adjoint-numeric", cfg.seed, cfg.trials, 0.0, {}};
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g(trial_seed(cfg.seed, r.suite, t));
    const Rational lambda = g.pick(weight_pool());
    const Density s1 = Density::term(lambda, g.trig_poly(n, cfg.degree));
    const Density s2 = Density::term(Rational(1) - lambda, g.trig_poly(n, cfg.degree));
    const IntegralValue lhs = scalar_product(op_apply(op, s1), s2, domain);
    const IntegralValue rhs = scalar_product(s1, op_apply(adj, s2), domain);
    double residual = std::abs(lhs.value - rhs.value) / (1.0 + std::abs(lhs.value));
    bool ok = residual <= 1e-9;
    if (lhs.exact() && rhs.exact()) {
      ok = *lhs.exact_factor == *rhs.exact_factor;
      if (ok) residual = 0.0;
    }
    r.max_residual = std::max(r.max_residual, residual);
    if (!ok) {
      std::ostringstream in;
      in << "op=" << to_string(op) << "; s1=" << to_string(s1) << "; s2=" << to_string(s2);
      r.failures.push_back({t, in.str(), std::to_string(lhs.value), std::to_string(rhs.value)});
    }
  }
  return r;
}

std::vector<SuiteReport> run_suites(const std::string& name, const RandomSuiteConfig& cfg) {
  std::vector<SuiteReport> out;
  if (name == "all") {
    for (const auto& s : suite_names()) out.push_back(run_suite(s, cfg));
  } else {
    out.push_back(run_suite(name, cfg));
  }
  return out;
}

std::string to_text(const SuiteReport& r) {
  char residual[32];
  std::snprintf(residual, sizeof residual, "%.3e", r.max_residual);
  std::ostringstream out;
  out << (r.passed() ? "PASS " : "FAIL ") << r.suite << " seed=" << r.seed << " trials=" << r.trials
      << " max_residual=" << residual << " failures=" << r.failures.size() << '\n';
  for (const auto& f : r.failures)
    out << "  trial " << f.trial << ": " << f.inputs << "\n    lhs: " << f.lhs << "\n    rhs: " << f.rhs << '\n';
  return out.str();
}

}  // namespace densops
