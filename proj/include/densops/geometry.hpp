#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "densops/chart.hpp"
#include "densops/operator.hpp"
#include "densops/pencil.hpp"

namespace densops {

/// Christoffel symbols Gamma^i_{km} of a symmetric affine connection.
/// Storage is lower-triangular in (k, m); symmetry holds by construction.
class Christoffel {
 public:
  explicit Christoffel(int n);

  int dimension() const { return n_; }
  const Expr& operator()(int i, int k, int m) const { return data_[index(i, k, m)]; }
  void set(int i, int k, int m, Expr v) { data_[index(i, k, m)] = std::move(v); }

  /// gamma_i = -Gamma^k_{ik}, the induced connection on densities.
  Connection density_connection() const;

 private:
  std::size_t index(int i, int k, int m) const {
    if (k < m) std::swap(k, m);
    return static_cast<std::size_t>(i * (n_ * (n_ + 1) / 2) + k * (k + 1) / 2 + m);
  }
  int n_;
  std::vector<Expr> data_;
};

/// Projectively invariant symbols; symmetric and trace-free (Pi^k_{km} = 0).
class PiSymbols {
 public:
  /// Throws Error unless the symbols are trace-free.
  explicit PiSymbols(Christoffel symbols);

  int dimension() const { return symbols_.dimension(); }
  const Expr& operator()(int i, int k, int m) const { return symbols_(i, k, m); }
  const Christoffel& symbols() const { return symbols_; }

 private:
  Christoffel symbols_;
};

/// Symbols Gamma-hat^A_{BC} on the extended chart (x^1..x^n, x^0 = log t). Index n stands
/// for the vertical coordinate x^0; indices 0..n-1 are the base coordinates.
class ExtendedChristoffel {
 public:
  /// Fills the structural entries: Gamma-hat^i_{k0} = -delta^i_k/(n+1), Gamma-hat^i_{00} =
  /// Gamma-hat^0_{i0} = 0, Gamma-hat^0_{00} = -1/(n+1). The base block starts at zero.
  explicit ExtendedChristoffel(int n);

  int dimension() const { return n_; }
  int vertical() const { return n_; }
  const Expr& operator()(int a, int b, int c) const;
  void set_base(int i, int k, int m, Expr v);
  void set_vertical(int k, int m, Expr v);

 private:
  int n_;
  Christoffel symbols_;  // dimension n + 1
};

class Metric {
 public:
  /// Computes the inverse by adjugate (n <= 3).
  explicit Metric(ExprMatrix g);
  /// Takes a supplied inverse; checks g g^{-1} = I entrywise.
  Metric(ExprMatrix g, ExprMatrix g_inverse);

  int dimension() const { return static_cast<int>(g_.size()); }
  const ExprMatrix& g() const { return g_; }
  const ExprMatrix& inverse() const { return g_inv_; }
  Expr determinant() const { return densops::determinant(g_); }

 private:
  ExprMatrix g_;
  ExprMatrix g_inv_;
};

struct VolumeForm {
  Expr rho;
};

/// gamma_i = -d_i log rho. Throws DomainError if rho is not positive at the chart's sample points.
Connection connection_from_volume(const VolumeForm& v, int dimension);

/// gamma_i = -(1/2) d_i log det g: the connection of the Riemannian volume sqrt(det g).
Connection connection_from_metric(const Metric& g);

/// Gamma^i_{km} = 1/2 g^{ij} (d_k g_{jm} + d_m g_{jk} - d_j g_{km}).
Christoffel levi_civita(const Metric& g);

/// gamma_{i'} = (dx^i/dx^{i'}) (gamma_i + d_i log det(dx'/dx)), in primed coordinates.
Connection gamma_transform(const Connection& gamma, const ChartChange& ch);

/// The same law with the primed components left as functions of the unprimed coordinates;
/// usable without an explicit inverse.
Connection gamma_transform_source(const Connection& gamma, std::span<const Expr> forward);

/// Affine transformation law of Christoffel symbols, result in primed coordinates.
Christoffel christoffel_transform(const Christoffel& gamma, const ChartChange& ch);

/// Metric as a covariant 2-tensor, in primed coordinates.
Metric metric_transform(const Metric& g, const ChartChange& ch);

/// Kaluza-Klein extraction: gamma with S gamma = B. `s_inverse` may supply S^{-1};
/// otherwise the adjugate is used for n <= 3. Throws DegenerateSymbolError if det S
/// vanishes symbolically or at a sample point; InconsistentSystemError if in addition B is
/// outside the range of S at some sample point.
Connection kk_extract(const SymbolTriple& st, const std::optional<ExprMatrix>& s_inverse = std::nullopt);

/// Numeric range check of B against S at the sample points: the largest least-squares
/// residual |S g - B| / (1 + |B|).
double kk_range_residual(const SymbolTriple& st, std::span<const Point> samples);

/// C - B^i gamma_i.
Expr brans_dicke(const SymbolTriple& st, const Connection& gamma);

struct CovariantParts {
  std::vector<Expr> vector;
  Expr scalar;
};

/// (B^i - S^{ik} G_k, C - 2 B^i G_i + S^{ik} G_i G_k) with G_i = -Gamma^k_{ik}.
CovariantParts covariant_parts(const SymbolTriple& st, const Christoffel& gamma);

/// P o op o P^{-1} with P the density pullback along `ch`: each d_i becomes
/// (dx^{j'}/dx^i) d_{j'} + w d_i log det(dx'/dx). Throws OrderError above order 2.
DiffOperator op_conjugate(const DiffOperator& op, const ChartChange& ch);

/// Pi^i_{km} = Gamma^i_{km} + (gamma_k delta^i_m + gamma_m delta^i_k) / (n + 1).
PiSymbols pi_symbols(const Christoffel& gamma);

struct ProjectiveComparison {
  bool equivalent = false;
  /// t_k with other - first = t_k delta^i_m + t_m delta^i_k, when equivalent.
  std::optional<std::vector<Expr>> shift;
};

ProjectiveComparison projectively_equivalent(const Christoffel& first, const Christoffel& other,
                                             EqualityPolicy policy = EqualityPolicy::SymbolicThenNumeric);

/// Adds t_k delta^i_m + t_m delta^i_k.
Christoffel projective_shift(const Christoffel& gamma, std::span<const Expr> t);

/// Thomas connection on the extended chart:
///   base block Pi^i_{km}, vertical block (d_r Pi^r_{km} - Pi^r_{sk} Pi^s_{rm}) / (n + 1).
ExtendedChristoffel thomas_lift(const PiSymbols& pi);

bool christoffel_equal(const Christoffel& a, const Christoffel& b,
                       EqualityPolicy policy = EqualityPolicy::SymbolicThenNumeric);

}  // namespace densops
