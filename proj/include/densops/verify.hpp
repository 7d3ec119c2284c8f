#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "densops/density.hpp"
#include "densops/geometry.hpp"
#include "densops/operator.hpp"
#include "densops/pencil.hpp"

namespace densops {

struct RandomSuiteConfig {
  std::uint64_t seed = 42;
  int trials = 50;
  int max_order = 3;
  int degree = 4;  // trig-polynomial degree bound for coefficients
};

/// Seeded source of random test structures. Draws depend only on the seed.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi);
  /// Nonzero p/q with |p| <= max_num, 1 <= q <= max_den.
  Rational rational(long max_num = 5, long max_den = 4);
  template <class T>
  const T& pick(const std::vector<T>& pool) {
    return pool[static_cast<std::size_t>(integer(0, static_cast<long>(pool.size()) - 1))];
  }

  /// Sum of rational multiples of prod sin(x_i)^a cos(x_i)^b with total degree <= degree.
  Expr trig_poly(int n, int degree, int max_terms = 3);
  /// Sum of rational multiples of monomials in x_i with total degree <= degree.
  Expr polynomial(int n, int degree, int max_terms = 3);
  DiffOperator op(int n, int max_order, int degree, int max_terms = 4);
  SymbolTriple symbol(int n, int degree);
  VectorField vector_field(int n, int degree);
  Connection covector(int n, int degree);
  Christoffel christoffel(int n, int degree);
  /// L L^T + I with L lower-triangular, constant diagonal and linear off-diagonal entries.
  ExprMatrix positive_matrix(int n);

 private:
  std::mt19937_64 rng_;
};

/// Seed for one trial of one named stream (splitmix64 over seed, name and trial index).
std::uint64_t trial_seed(std::uint64_t seed, std::string_view stream, int trial);

/// Weights drawn for random densities.
const std::vector<Rational>& weight_pool();

struct SuiteFailure {
  int trial = 0;
  std::string inputs;
  std::string lhs;
  std::string rhs;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int trials = 0;
  double max_residual = 0.0;
  std::vector<SuiteFailure> failures;
  bool passed() const { return failures.empty(); }
};

/// Compares <op s1, s2> with <s1, op* s2> on the torus for random trig-polynomial densities
/// of complementary weights; exact whenever both integrals take the Fourier path.
SuiteReport check_adjoint_numeric(const DiffOperator& op, const RandomSuiteConfig& cfg);

/// Suite names in execution order, without "all".
const std::vector<std::string>& suite_names();

/// Runs one named suite. Throws Error for an unknown name.
SuiteReport run_suite(const std::string& name, const RandomSuiteConfig& cfg);

/// "all" expands to every suite.
std::vector<SuiteReport> run_suites(const std::string& name, const RandomSuiteConfig& cfg);

/// One summary line followed by one line per failure.
std::string to_text(const SuiteReport& r);

}  // namespace densops
