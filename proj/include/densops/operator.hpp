#pragma once

#include <map>
#include <string>
#include <vector>

#include "densops/density.hpp"
#include "densops/expr.hpp"

namespace densops {

/// Index of one normal-ordered monomial d^alpha w^k.
struct OpKey {
  std::vector<int> alpha;  // multi-index over d_1..d_n
  int w = 0;               // power of the weight operator

  int order() const;
  friend bool operator==(const OpKey&, const OpKey&) = default;
};

/// Ordering by (|alpha|+k, alpha read as a sorted list of derivative indices, k).
struct OpKeyLess {
  bool operator()(const OpKey& a, const OpKey& b) const;
};

/// Weight-preserving differential operator on densities, kept normal-ordered:
/// sum of c(x) d^alpha w^k with every coefficient to the left of every d and w.
class DiffOperator {
 public:
  using TermMap = std::map<OpKey, Expr, OpKeyLess>;

  explicit DiffOperator(int dimension);

  static DiffOperator multiplication(int dimension, const Expr& c);
  /// d_index with zero-based index.
  static DiffOperator partial(int dimension, int index);
  static DiffOperator weight(int dimension);

  int dimension() const { return dimension_; }
  /// max(|alpha| + k) over stored terms; 0 for the zero operator.
  int order() const;
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  Expr coefficient(const OpKey& key) const;
  /// Largest power of w occurring.
  int weight_degree() const;

  void add_term(const OpKey& key, const Expr& coeff);

  DiffOperator& operator+=(const DiffOperator& o);
  DiffOperator& operator-=(const DiffOperator& o);
  friend DiffOperator operator+(DiffOperator a, const DiffOperator& b) { return a += b; }
  friend DiffOperator operator-(DiffOperator a, const DiffOperator& b) { return a -= b; }
  friend DiffOperator operator-(const DiffOperator& a);
  /// Left multiplication by a function.
  friend DiffOperator operator*(const Expr& c, const DiffOperator& op);
  friend bool operator==(const DiffOperator& a, const DiffOperator& b);

 private:
  int dimension_;
  TermMap terms_;
};

OpKey key_of(int dimension, std::initializer_list<int> derivative_indices, int w = 0);

Density op_apply(const DiffOperator& op, const Density& d);

/// Normal-ordered product a o b.
DiffOperator op_compose(const DiffOperator& a, const DiffOperator& b);
/// Adjoint for the canonical pairing: x* = x, d* = -d, w* = 1 - w, reversed order.
DiffOperator op_adjoint(const DiffOperator& op);
/// The pencil member at weight `lambda`: every w replaced by lambda.
DiffOperator restrict(const DiffOperator& op, const Rational& lambda);

bool op_equal(const DiffOperator& a, const DiffOperator& b,
              EqualityPolicy policy = EqualityPolicy::SymbolicThenNumeric);
bool is_self_adjoint(const DiffOperator& op, EqualityPolicy policy = EqualityPolicy::SymbolicThenNumeric);

/// div K = d_i K^i - K^0 for K = K^i d_i + K^0 w. Throws OrderError for any other shape.
Expr divergence_hat(const DiffOperator& k);

/// Symmetric matrix of expressions with upper-triangular storage.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n * (n + 1) / 2)) {}
  int size() const { return n_; }
  const Expr& operator()(int i, int k) const { return data_[index(i, k)]; }
  void set(int i, int k, Expr v) { data_[index(i, k)] = std::move(v); }
  ExprMatrix to_matrix() const;

 private:
  std::size_t index(int i, int k) const {
    if (i > k) std::swap(i, k);
    return static_cast<std::size_t>(i * n_ - i * (i - 1) / 2 + (k - i));
  }
  int n_;
  std::vector<Expr> data_;
};

/// Blocks of the extended principal symbol [[S, B], [B^T, C]] in coordinates (x, log t).
struct SymbolTriple {
  SymmetricMatrix S;
  std::vector<Expr> B;
  Expr C;

  explicit SymbolTriple(int n) : S(n), B(static_cast<std::size_t>(n)) {}
  int dimension() const { return S.size(); }
};

bool symbol_equal(const SymbolTriple& a, const SymbolTriple& b,
                  EqualityPolicy policy = EqualityPolicy::SymbolicThenNumeric);

/// S from the d_i d_k coefficients (symmetrised), B^i as half the w d_i coefficient, C as
/// the w^2 coefficient. Throws OrderError above order 2.
SymbolTriple extract_symbol(const DiffOperator& op);

/// The self-adjoint normalised operator with symbol `st`:
/// S d d + (d_k S^{ki}) d_i + (2w - 1) B^i d_i + w (d_i B^i) + w (w - 1) C.
DiffOperator build_canonical(const SymbolTriple& st);

/// Prints in the operator DSL, terms sorted by OpKeyLess.
std::string to_string(const DiffOperator& op, std::span<const std::string> names = {});

}  // namespace densops
