#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "densops/error.hpp"
#include "densops/verify.hpp"

namespace densops {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

class Recorder {
 public:
  Recorder(std::string suite, const RandomSuiteConfig& cfg) : report_{std::move(suite), cfg.seed, cfg.trials, 0.0, {}} {}

  void check(int trial, bool ok, double residual, std::string inputs, std::string lhs, std::string rhs) {
    report_.max_residual = std::max(report_.max_residual, residual);
    if (!ok) report_.failures.push_back({trial, std::move(inputs), std::move(lhs), std::move(rhs)});
  }
  void exact(int trial, bool ok, std::string inputs, std::string lhs, std::string rhs) {
    check(trial, ok, 0.0, std::move(inputs), std::move(lhs), std::move(rhs));
  }
  void merge(const SuiteReport& r, int trial) {
    report_.max_residual = std::max(report_.max_residual, r.max_residual);
    for (auto f : r.failures) {
      f.trial = trial;
      report_.failures.push_back(std::move(f));
    }
  }
  Generator generator(int trial) const { return Generator(trial_seed(report_.seed, report_.suite, trial)); }
  SuiteReport finish() { return std::move(report_); }

 private:
  SuiteReport report_;
};

std::string str(const SymbolTriple& st) {
  std::ostringstream out;
  const int n = st.dimension();
  out << "S=[";
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) out << (i + k > 0 ? ", " : "") << to_string(st.S(i, k));
  out << "] B=[";
  for (int i = 0; i < n; ++i) out << (i > 0 ? ", " : "") << to_string(st.B[u(i)]);
  out << "] C=" << to_string(st.C);
  return out.str();
}

std::string str(const std::vector<Expr>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i > 0 ? ", " : "") + to_string(v[i]);
  return out + "]";
}

std::string str(const Christoffel& g) {
  std::vector<Expr> flat;
  for (int i = 0; i < g.dimension(); ++i)
    for (int k = 0; k < g.dimension(); ++k)
      for (int m = 0; m <= k; ++m) flat.push_back(g(i, k, m));
  return str(flat);
}

/// Largest |a - b| / (1 + |a|) over the points; points outside the domain of either side
/// are skipped.
double max_relative_difference(const Expr& a, const Expr& b, const std::vector<Point>& points) {
  double worst = 0.0;
  for (const auto& p : points) {
    try {
      const double va = eval(a, p);
      const double vb = eval(b, p);
      worst = std::max(worst, std::abs(va - vb) / (1.0 + std::abs(va)));
    } catch (const DomainError&) {
    }
  }
  return worst;
}

int trial_dimension(int trial, int max_dimension) { return 1 + trial % max_dimension; }

SuiteReport adjoint_involution(const RandomSuiteConfig& cfg) {
  Recorder rec("adjoint-involution", cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const DiffOperator a = g.op(n, cfg.max_order, cfg.degree);
    const DiffOperator twice = op_adjoint(op_adjoint(a));
    rec.exact(t, twice == a, "A=" + to_string(a), to_string(twice), to_string(a));
  }
  return rec.finish();
}

SuiteReport adjoint_antihomomorphism(const RandomSuiteConfig& cfg) {
  Recorder rec("adjoint-antihomomorphism", cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const DiffOperator a = g.op(n, cfg.max_order, cfg.degree);
    const DiffOperator b = g.op(n, cfg.max_order, cfg.degree);
    const DiffOperator lhs = op_adjoint(op_compose(a, b));
    const DiffOperator rhs = op_compose(op_adjoint(b), op_adjoint(a));
    rec.exact(t, lhs == rhs, "A=" + to_string(a) + "; B=" + to_string(b), to_string(lhs), to_string(rhs));
  }
  return rec.finish();
}

SuiteReport compose_apply(const RandomSuiteConfig& cfg) {
  Recorder rec("compose-apply", cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const DiffOperator a = g.op(n, cfg.max_order, cfg.degree);
    const DiffOperator b = g.op(n, cfg.max_order, cfg.degree);
    const Density s = Density::term(g.pick(weight_pool()), g.trig_poly(n, cfg.degree)) +
                      Density::term(g.pick(weight_pool()), g.trig_poly(n, cfg.degree));
    const Density lhs = op_apply(op_compose(a, b), s);
    const Density rhs = op_apply(a, op_apply(b, s));
    rec.exact(t, lhs == rhs, "A=" + to_string(a) + "; B=" + to_string(b) + "; s=" + to_string(s), to_string(lhs),
              to_string(rhs));
  }
  return rec.finish();
}

SuiteReport scalar_product_duality(const RandomSuiteConfig& cfg) {
  Recorder rec("scalar-product-duality", cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const DiffOperator a = g.op(n, cfg.max_order, cfg.degree);
    RandomSuiteConfig one = cfg;
    one.seed = trial_seed(cfg.seed, "scalar-product-duality/densities", t);
    one.trials = 1;
    rec.merge(check_adjoint_numeric(a, one), t);
  }
  return rec.finish();
}

SuiteReport canonical_self_adjoint(const RandomSuiteConfig& cfg) {
  Recorder rec("canonical-self-adjoint", cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const SymbolTriple st = g.symbol(n, cfg.degree);
    const DiffOperator d = build_canonical(st);
    const DiffOperator adj = op_adjoint(d);
    rec.exact(t, adj == d, "st=" + str(st), to_string(adj), to_string(d));
    const Density one = op_apply(d, Density::term(Rational(0), Expr(1)));
    rec.exact(t, one.is_zero(), "normalisation; st=" + str(st), to_string(one), "0");
  }
  return rec.finish();
}

SuiteReport theorem_uniqueness(const RandomSuiteConfig& cfg) {
  Recorder rec("theorem-uniqueness", cfg);
  const std::vector<Rational> allowed = {Rational(2), Rational(-1), Rational(3, 2)};
  const std::vector<Rational> forbidden = {Rational(0), Rational(1, 2), Rational(1)};
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const SymbolTriple st = g.symbol(n, cfg.degree);
    const DiffOperator d = build_canonical(st);
    for (const auto& l0 : allowed) {
      const LambdaOperator l(restrict(d, l0), l0);
      const SymbolTriple back = pencil_symbol(l);
      rec.exact(t, symbol_equal(back, st, EqualityPolicy::Symbolic), "l0=" + l0.to_string() + "; st=" + str(st),
                str(back), str(st));
      const DiffOperator rebuilt = canonical_pencil(l);
      rec.exact(t, rebuilt == d, "l0=" + l0.to_string() + "; st=" + str(st), to_string(rebuilt), to_string(d));
    }
    for (const auto& l0 : forbidden) {
      std::string outcome = "accepted";
      try {
        pencil_symbol(LambdaOperator(restrict(d, l0), l0));
      } catch (const ForbiddenWeightError&) {
        outcome = "ForbiddenWeightError";
      }
      rec.exact(t, outcome == "ForbiddenWeightError", "l0=" + l0.to_string() + "; st=" + str(st), outcome,
                "ForbiddenWeightError");
    }
  }
  return rec.finish();
}

SuiteReport example_crosscheck(const RandomSuiteConfig& cfg) {
  Recorder rec("example-crosscheck", cfg);
  const std::vector<Rational> weights = {Rational(2), Rational(-1), Rational(3, 2), Rational(3), Rational(-1, 2)};
  const int degree = std::min(cfg.degree, 2);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const VectorField x = g.vector_field(n, degree);
    const VectorField y = g.vector_field(n, degree);
    const Rational l0 = g.pick(weights);
    const std::string inputs = "X=" + str(x.components) + "; Y=" + str(y.components) + "; l0=" + l0.to_string();
    const DiffOperator e = example_pencil(x, y, l0);
    const DiffOperator l = restrict(op_compose(lie_lift(x), lie_lift(y)), l0);
    const DiffOperator c = canonical_pencil(LambdaOperator(l, l0));
    rec.exact(t, c == e, inputs, to_string(c), to_string(e));
    const DiffOperator sym = example_pencil_symmetrised(x, y, l0);
    rec.exact(t, sym == e, "symmetrised form; " + inputs, to_string(sym), to_string(e));
  }
  return rec.finish();
}

SuiteReport lie_structure(const RandomSuiteConfig& cfg) {
  Recorder rec("lie-structure", cfg);
  const int degree = std::min(cfg.degree, 3);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const VectorField x = g.vector_field(n, degree);
    const VectorField y = g.vector_field(n, degree);
    const std::string inputs = "X=" + str(x.components) + "; Y=" + str(y.components);
    const DiffOperator lx = lie_lift(x);
    const DiffOperator ly = lie_lift(y);
    const Expr div = divergence_hat(lx);
    rec.exact(t, div.is_zero(), "div; " + inputs, to_string(div), "0");
    const DiffOperator lhs = op_compose(lx, ly) - op_compose(ly, lx);
    const DiffOperator rhs = lie_lift(commutator(x, y));
    rec.exact(t, lhs == rhs, inputs, to_string(lhs), to_string(rhs));
  }
  return rec.finish();
}

SuiteReport kk_extraction(const RandomSuiteConfig& cfg) {
  Recorder rec("kk-extraction", cfg);
  const int degree = std::min(cfg.degree, 2);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 3);
    const ExprMatrix s = g.positive_matrix(n);
    const Connection gamma = g.covector(n, degree);
    SymbolTriple st(n);
    for (int i = 0; i < n; ++i) {
      Expr b;
      for (int k = 0; k < n; ++k) {
        if (k >= i) st.S.set(i, k, s[u(i)][u(k)]);
        b += s[u(i)][u(k)] * gamma.components[u(k)];
      }
      st.B[u(i)] = b;
    }
    st.C = g.trig_poly(n, degree, 2);
    const Connection got = kk_extract(st);
    const auto samples = default_samples(n, 8);
    for (int k = 0; k < n; ++k) {
      const Expr& a = got.components[u(k)];
      const Expr& b = gamma.components[u(k)];
      const bool exact = expr_equal(a, b, EqualityPolicy::Symbolic);
      const double residual = exact ? 0.0 : max_relative_difference(b, a, samples);
      rec.check(t, exact || residual <= 1e-9, residual, "st=" + str(st), to_string(a), to_string(b));
    }

    // A rank-one S = v v^T with v = (1, a): B = (b, a b + c) with c != 0 is outside the range.
    const Expr a = g.polynomial(2, 1, 2);
    const Expr b = g.trig_poly(2, degree, 2);
    SymbolTriple degenerate(2);
    degenerate.S.set(0, 0, Expr(1));
    degenerate.S.set(0, 1, a);
    degenerate.S.set(1, 1, a * a);
    degenerate.B = {b, a * b + Expr(g.rational())};
    std::string outcome = "solved";
    try {
      kk_extract(degenerate);
    } catch (const InconsistentSystemError&) {
      outcome = "InconsistentSystemError";
    } catch (const DegenerateSymbolError&) {
      outcome = "DegenerateSymbolError";
    }
    rec.exact(t, outcome == "InconsistentSystemError", "degenerate st=" + str(degenerate), outcome,
              "InconsistentSystemError");
    degenerate.B = {b, a * b};
    outcome = "solved";
    try {
      kk_extract(degenerate);
    } catch (const InconsistentSystemError&) {
      outcome = "InconsistentSystemError";
    } catch (const DegenerateSymbolError&) {
      outcome = "DegenerateSymbolError";
    }
    rec.exact(t, outcome == "DegenerateSymbolError", "degenerate st=" + str(degenerate), outcome,
              "DegenerateSymbolError");
  }
  return rec.finish();
}

bool flat_thomas_constants(int n, std::string& detail) {
  const ExtendedChristoffel lift = thomas_lift(pi_symbols(Christoffel(n)));
  const int v = lift.vertical();
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      for (int c = 0; c <= n; ++c) {
        Expr want;
        if (a < n && b < n && c == v && a == b) want = Expr(Rational(-1, n + 1));
        if (a < n && c < n && b == v && a == c) want = Expr(Rational(-1, n + 1));
        if (a == v && b == v && c == v) want = Expr(Rational(-1, n + 1));
        if (!(lift(a, b, c) == want)) {
          detail = "n=" + std::to_string(n) + " entry (" + std::to_string(a) + "," + std::to_string(b) + "," +
                   std::to_string(c) + ") = " + to_string(lift(a, b, c));
          return false;
        }
      }
    }
  }
  return true;
}

SuiteReport projective(const RandomSuiteConfig& cfg) {
  Recorder rec("projective", cfg);
  const int degree = std::min(cfg.degree, 2);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 3);
    const Christoffel gamma = g.christoffel(n, degree);
    const PiSymbols pi = pi_symbols(gamma);
    for (int m = 0; m < n; ++m) {
      Expr trace;
      for (int k = 0; k < n; ++k) trace += pi(k, k, m);
      rec.exact(t, trace.is_zero(), "trace; Gamma=" + str(gamma), to_string(trace), "0");
    }
    const Connection shift = g.covector(n, degree);
    const Christoffel shifted = projective_shift(gamma, shift.components);
    const PiSymbols pi2 = pi_symbols(shifted);
    const std::string inputs = "Gamma=" + str(gamma) + "; t=" + str(shift.components);
    rec.exact(t, christoffel_equal(pi2.symbols(), pi.symbols(), EqualityPolicy::Symbolic), inputs,
              str(pi2.symbols()), str(pi.symbols()));
    const ProjectiveComparison cmp = projectively_equivalent(gamma, shifted, EqualityPolicy::Symbolic);
    bool shift_ok = cmp.equivalent && cmp.shift.has_value();
    if (shift_ok)
      for (int k = 0; k < n; ++k) shift_ok = shift_ok && (*cmp.shift)[u(k)] == shift.components[u(k)];
    rec.exact(t, shift_ok, "recovered shift; " + inputs, cmp.shift ? str(*cmp.shift) : "not equivalent",
              str(shift.components));
    std::string detail;
    rec.exact(t, flat_thomas_constants(n, detail), "flat Thomas lift", detail, "structural constants");
  }
  return rec.finish();
}

ChartChange affine_change(int n) {
  const Expr x1 = Expr::coord(0);
  if (n == 1) return ChartChange({Expr(2) * x1}, {Expr(Rational(1, 2)) * x1});
  const Expr x2 = Expr::coord(1);
  return ChartChange({Expr(2) * x1 + x2, Expr(3) * x2},
                     {Expr(Rational(1, 2)) * x1 - Expr(Rational(1, 6)) * x2, Expr(Rational(1, 3)) * x2});
}

ChartChange nonlinear_change(int n) {
  const Expr x1 = Expr::coord(0);
  if (n == 1) return ChartChange({exp(x1)}, {log(x1)});
  const Expr x2 = Expr::coord(1);
  return ChartChange({exp(x1), x2 + x1 * x1}, {log(x1), x2 - log(x1) * log(x1)});
}

struct CovarianceCase {
  const char* label;
  ChartChange change;
  bool exact;
};

void check_close(Recorder& rec, int trial, const CovarianceCase& c, const Expr& got, const Expr& want,
                 const std::string& inputs) {
  if (c.exact) {
    rec.exact(trial, expr_equal(got, want, EqualityPolicy::Symbolic), inputs, to_string(got), to_string(want));
    return;
  }
  const bool symbolic = expr_equal(got, want, EqualityPolicy::Symbolic);
  const double residual = symbolic ? 0.0 : max_relative_difference(want, got, c.change.target_samples());
  rec.check(trial, symbolic || residual <= 1e-9, residual, inputs, to_string(got), to_string(want));
}

SuiteReport covariance(const RandomSuiteConfig& cfg) {
  Recorder rec("covariance", cfg);
  const int degree = std::min(cfg.degree, 2);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const std::vector<CovarianceCase> cases = {{"affine", affine_change(n), true},
                                               {"nonlinear", nonlinear_change(n), false}};
    const ChartChange& first = cases[1].change;
    const ChartChange& second = cases[0].change;
    const ChartChange both = first.then(second);

    const Density s = Density::term(g.pick(weight_pool()), g.trig_poly(n, degree)) +
                      Density::term(g.pick(weight_pool()), g.trig_poly(n, degree));
    const Density stepwise = density_pullback(density_pullback(s, first), second);
    const Density direct = density_pullback(s, both);
    rec.exact(t, density_equal(stepwise, direct, EqualityPolicy::Symbolic), "functoriality; s=" + to_string(s),
              to_string(stepwise), to_string(direct));

    const Connection gamma = g.covector(n, degree);
    const Connection g2 = gamma_transform(gamma_transform(gamma, first), second);
    const Connection g12 = gamma_transform(gamma, both);
    for (int k = 0; k < n; ++k) {
      const double r = max_relative_difference(g12.components[u(k)], g2.components[u(k)], both.target_samples());
      rec.check(t, r <= 1e-9, r, "gamma composition; gamma=" + str(gamma.components),
                to_string(g2.components[u(k)]), to_string(g12.components[u(k)]));
    }

    SymbolTriple induced = g.symbol(n, degree);
    for (int i = 0; i < n; ++i) {
      Expr b;
      for (int k = 0; k < n; ++k) b += induced.S(i, k) * gamma.components[u(k)];
      induced.B[u(i)] = b;
    }
    const SymbolTriple st = g.symbol(n, degree);
    const Christoffel conn = g.christoffel(n, degree);
    const Expr bd = brans_dicke(induced, gamma);
    const CovariantParts parts = covariant_parts(st, conn);

    for (const auto& c : cases) {
      const ChartChange& ch = c.change;
      const std::string tag = std::string(c.label) + " ";

      const SymbolTriple induced2 = extract_symbol(op_conjugate(build_canonical(induced), ch));
      const Expr bd2 = brans_dicke(induced2, gamma_transform(gamma, ch));
      check_close(rec, t, c, bd2, ch.to_target(bd),
                  tag + "Brans-Dicke scalar; st=" + str(induced) + "; gamma=" + str(gamma.components));

      const SymbolTriple st2 = extract_symbol(op_conjugate(build_canonical(st), ch));
      const CovariantParts parts2 = covariant_parts(st2, christoffel_transform(conn, ch));
      const std::string inputs = "st=" + str(st) + "; Gamma=" + str(conn);
      check_close(rec, t, c, parts2.scalar, ch.to_target(parts.scalar), tag + "covariant scalar; " + inputs);
      const ExprMatrix phi = ch.forward_jacobian();
      for (int a = 0; a < n; ++a) {
        Expr want;
        for (int i = 0; i < n; ++i) want += phi[u(a)][u(i)] * parts.vector[u(i)];
        check_close(rec, t, c, parts2.vector[u(a)], ch.to_target(want), tag + "covariant vector; " + inputs);
      }
    }
  }
  return rec.finish();
}

SuiteReport integrator_consistency(const RandomSuiteConfig& cfg) {
  Recorder rec("integrator-consistency", cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    Generator g = rec.generator(t);
    const int n = trial_dimension(t, 2);
    const Expr e = g.trig_poly(n, 6, 4);
    const auto mean = torus_mean_exact(e);
    const double exact = mean ? mean->to_double() * std::pow(2.0 * std::numbers::pi, n) : 0.0;
    const double quad = torus_quadrature(e, n);
    const double r = std::abs(exact - quad) / (1.0 + std::abs(exact));
    rec.check(t, mean.has_value() && r <= 1e-10, r, "e=" + to_string(e), std::to_string(exact), std::to_string(quad));
  }
  return rec.finish();
}

using SuiteFn = SuiteReport (*)(const RandomSuiteConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"adjoint-involution", adjoint_involution},
      {"adjoint-antihomomorphism", adjoint_antihomomorphism},
      {"compose-apply", compose_apply},
      {"scalar-product-duality", scalar_product_duality},
      {"canonical-self-adjoint", canonical_self_adjoint},
      {"theorem-uniqueness", theorem_uniqueness},
      {"example-crosscheck", example_crosscheck},
      {"lie-structure", lie_structure},
      {"kk-extraction", kk_extraction},
      {"projective", projective},
      {"covariance", covariance},
      {"integrator-consistency", integrator_consistency},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const RandomSuiteConfig& cfg) {
  for (const auto& [n, fn] : registry())
    if (n == name) return fn(cfg);
  throw Error("unknown suite '" + name + "'");
}

}  // namespace densops
