#include "densops/geometry.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "densops/error.hpp"

namespace densops {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

Expr kronecker(int i, int k) { return i == k ? Expr(1) : Expr(); }

void require_dim(int a, int b, const char* what) {
  if (a != b) throw Error(std::string(what) + ": dimensions differ");
}

}  // namespace

Christoffel::Christoffel(int n) : n_(n), data_(static_cast<std::size_t>(n * (n * (n + 1) / 2))) {
  if (n < 1) throw Error("Christoffel symbols need a positive dimension");
}

Connection Christoffel::density_connection() const {
  Connection g{std::vector<Expr>(u(n_))};
  for (int i = 0; i < n_; ++i) {
    Expr trace;
    for (int k = 0; k < n_; ++k) trace += (*this)(k, i, k);
    g.components[u(i)] = -trace;
  }
  return g;
}

PiSymbols::PiSymbols(Christoffel symbols) : symbols_(std::move(symbols)) {
  const int n = symbols_.dimension();
  for (int m = 0; m < n; ++m) {
    Expr trace;
    for (int k = 0; k < n; ++k) trace += symbols_(k, k, m);
    if (!expr_equal(trace, Expr())) throw Error("projective symbols must be trace-free");
  }
}

ExtendedChristoffel::ExtendedChristoffel(int n) : n_(n), symbols_(n + 1) {
  const Expr c = Expr(Rational(-1, n + 1));
  for (int i = 0; i < n; ++i) symbols_.set(i, i, n, c);
  symbols_.set(n, n, n, c);
}

const Expr& ExtendedChristoffel::operator()(int a, int b, int c) const {
  if (a < 0 || b < 0 || c < 0 || a > n_ || b > n_ || c > n_) throw IndexError("extended index out of range");
  return symbols_(a, b, c);
}

void ExtendedChristoffel::set_base(int i, int k, int m, Expr v) {
  if (i >= n_ || k >= n_ || m >= n_) throw IndexError("base index out of range");
  symbols_.set(i, k, m, std::move(v));
}

void ExtendedChristoffel::set_vertical(int k, int m, Expr v) {
  if (k >= n_ || m >= n_) throw IndexError("base index out of range");
  symbols_.set(n_, k, m, std::move(v));
}

Metric::Metric(ExprMatrix g) : g_(std::move(g)) {
  const int n = dimension();
  if (n < 1 || n > 3) throw Error("symbolic metric inversion is limited to n <= 3; supply the inverse");
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      if (!expr_equal(g_[u(i)][u(k)], g_[u(k)][u(i)])) throw Error("metric must be symmetric");
  const Expr det = densops::determinant(g_);
  if (is_zero_symbolic(det)) throw DegenerateSymbolError("metric is degenerate");
  const Expr inv_det = densops::inverse(det);
  g_inv_ = adjugate(g_);
  for (auto& row : g_inv_)
    for (auto& e : row) e *= inv_det;
}

Metric::Metric(ExprMatrix g, ExprMatrix g_inverse) : g_(std::move(g)), g_inv_(std::move(g_inverse)) {
  const int n = dimension();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (!expr_equal(g_[u(i)][u(k)], g_[u(k)][u(i)])) throw Error("metric must be symmetric");
      Expr p;
      for (int j = 0; j < n; ++j) p += g_[u(i)][u(j)] * g_inv_[u(j)][u(k)];
      if (!expr_equal(p, kronecker(i, k))) throw Error("supplied inverse metric does not invert g");
    }
  }
}

Connection connection_from_volume(const VolumeForm& v, int dimension) {
  for (const auto& p : default_samples(dimension))
    if (!(eval(v.rho, p) > 0.0)) throw DomainError("volume form density must be positive");
  const Expr l = log(v.rho);
  Connection g{std::vector<Expr>(u(dimension))};
  for (int i = 0; i < dimension; ++i) g.components[u(i)] = -diff(l, i);
  return g;
}

Connection connection_from_metric(const Metric& g) {
  const int n = g.dimension();
  const Expr l = log(g.determinant());
  Connection c{std::vector<Expr>(u(n))};
  for (int i = 0; i < n; ++i) c.components[u(i)] = Expr(Rational(-1, 2)) * diff(l, i);
  return c;
}

Christoffel levi_civita(const Metric& g) {
  const int n = g.dimension();
  Christoffel out(n);
  const auto& gl = g.g();
  const auto& gu = g.inverse();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int m = 0; m <= k; ++m) {
        Expr s;
        for (int j = 0; j < n; ++j) {
          if (gu[u(i)][u(j)].is_zero()) continue;
          s += gu[u(i)][u(j)] * (diff(gl[u(j)][u(m)], k) + diff(gl[u(j)][u(k)], m) - diff(gl[u(k)][u(m)], j));
        }
        out.set(i, k, m, Expr(Rational(1, 2)) * s);
      }
    }
  }
  return out;
}

Connection gamma_transform_source(const Connection& gamma, std::span<const Expr> forward) {
  const int n = gamma.dimension();
  require_dim(n, static_cast<int>(forward.size()), "gamma_transform");
  const ExprMatrix jac = jacobian(forward, n);
  const Expr det = determinant(jac);
  const Expr inv_det = inverse(det);
  const ExprMatrix adj = adjugate(jac);  // (dx/dx')^i_a = adj[i][a] / det
  Connection out{std::vector<Expr>(u(n))};
  for (int a = 0; a < n; ++a) {
    Expr s;
    for (int i = 0; i < n; ++i) s += adj[u(i)][u(a)] * (gamma.components[u(i)] + diff(det, i) * inv_det);
    out.components[u(a)] = s * inv_det;
  }
  return out;
}

Connection gamma_transform(const Connection& gamma, const ChartChange& ch) {
  const int n = gamma.dimension();
  require_dim(n, ch.dimension(), "gamma_transform");
  const Expr det = ch.forward_det();
  const Expr inv_det = inverse(det);
  const ExprMatrix back = ch.inverse_jacobian();  // dx^i/dx'^a in x'
  std::vector<Expr> inner;
  for (int i = 0; i < n; ++i) inner.push_back(ch.to_target(gamma.components[u(i)] + diff(det, i) * inv_det));
  Connection out{std::vector<Expr>(u(n))};
  for (int a = 0; a < n; ++a) {
    Expr s;
    for (int i = 0; i < n; ++i) s += back[u(i)][u(a)] * inner[u(i)];
    out.components[u(a)] = s;
  }
  return out;
}

Christoffel christoffel_transform(const Christoffel& gamma, const ChartChange& ch) {
  const int n = gamma.dimension();
  require_dim(n, ch.dimension(), "christoffel_transform");
  const ExprMatrix fwd = ch.forward_jacobian();
  ExprMatrix phi(u(n), std::vector<Expr>(u(n)));  // dx'^a/dx^i in x'
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) phi[u(a)][u(i)] = ch.to_target(fwd[u(a)][u(i)]);
  const ExprMatrix back = ch.inverse_jacobian();
  std::vector<Expr> moved(u(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) moved[u((i * n + k) * n + m)] = ch.to_target(gamma(i, k, m));
  Christoffel out(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c <= b; ++c) {
        Expr s;
        for (int i = 0; i < n; ++i) {
          if (phi[u(a)][u(i)].is_zero()) continue;
          Expr inner = diff(diff(ch.inverse()[u(i)], b), c);
          for (int k = 0; k < n; ++k)
            for (int m = 0; m < n; ++m)
              inner += back[u(k)][u(b)] * back[u(m)][u(c)] * moved[u((i * n + k) * n + m)];
          s += phi[u(a)][u(i)] * inner;
        }
        out.set(a, b, c, s);
      }
    }
  }
  return out;
}

Metric metric_transform(const Metric& g, const ChartChange& ch) {
  const int n = g.dimension();
  require_dim(n, ch.dimension(), "metric_transform");
  const ExprMatrix back = ch.inverse_jacobian();
  ExprMatrix gm(u(n), std::vector<Expr>(u(n)));
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) gm[u(k)][u(m)] = ch.to_target(g.g()[u(k)][u(m)]);
  ExprMatrix out(u(n), std::vector<Expr>(u(n)));
  for (int b = 0; b < n; ++b) {
    for (int c = 0; c < n; ++c) {
      Expr s;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) s += back[u(k)][u(b)] * back[u(m)][u(c)] * gm[u(k)][u(m)];
      out[u(b)][u(c)] = s;
    }
  }
  return Metric(std::move(out));
}

double kk_range_residual(const SymbolTriple& st, std::span<const Point> samples) {
  const int n = st.dimension();
  double worst = 0.0;
  for (const auto& p : samples) {
    Eigen::MatrixXd s(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      b(i) = eval(st.B[u(i)], p);
      for (int k = 0; k < n; ++k) s(i, k) = eval(st.S(i, k), p);
    }
    const Eigen::VectorXd g = s.completeOrthogonalDecomposition().solve(b);
    worst = std::max(worst, (s * g - b).norm() / (1.0 + b.norm()));
  }
  return worst;
}

Connection kk_extract(const SymbolTriple& st, const std::optional<ExprMatrix>& s_inverse) {
  const int n = st.dimension();
  const ExprMatrix s = st.S.to_matrix();
  Connection out{std::vector<Expr>(u(n))};
  if (s_inverse) {
    const ExprMatrix& inv = *s_inverse;
    if (static_cast<int>(inv.size()) != n) throw Error("supplied S^{-1} has the wrong size");
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        Expr p;
        for (int j = 0; j < n; ++j) p += s[u(i)][u(j)] * inv[u(j)][u(k)];
        if (!expr_equal(p, kronecker(i, k))) throw Error("supplied S^{-1} does not invert S");
      }
    }
    for (int k = 0; k < n; ++k) {
      Expr g;
      for (int i = 0; i < n; ++i) g += inv[u(k)][u(i)] * st.B[u(i)];
      out.components[u(k)] = g;
    }
    return out;
  }
  if (n > 3) throw Error("symbolic inversion of S is limited to n <= 3; supply S^{-1}");
  const Expr det = determinant(s);
  const auto samples = default_samples(n);
  bool degenerate = is_zero_symbolic(det);
  for (const auto& p : samples) {
    if (degenerate) break;
    try {
      degenerate = !(std::abs(eval(det, p)) > 1e-12);
    } catch (const DomainError&) {
    }
  }
  if (degenerate) {
    if (kk_range_residual(st, samples) > 1e-9)
      throw InconsistentSystemError("S gamma = B has no solution: B lies outside the range of S");
    throw DegenerateSymbolError("S is degenerate: the connection is not determined by the symbol");
  }
  const Expr inv_det = inverse(det);
  const ExprMatrix adj = adjugate(s);
  for (int k = 0; k < n; ++k) {
    Expr g;
    for (int i = 0; i < n; ++i) g += adj[u(k)][u(i)] * st.B[u(i)];
    out.components[u(k)] = g * inv_det;
  }
  return out;
}

Expr brans_dicke(const SymbolTriple& st, const Connection& gamma) {
  require_dim(st.dimension(), gamma.dimension(), "brans_dicke");
  Expr r = st.C;
  for (int i = 0; i < st.dimension(); ++i) r -= st.B[u(i)] * gamma.components[u(i)];
  return r;
}

CovariantParts covariant_parts(const SymbolTriple& st, const Christoffel& gamma) {
  const int n = st.dimension();
  require_dim(n, gamma.dimension(), "covariant_parts");
  const Connection g = gamma.density_connection();
  CovariantParts out{std::vector<Expr>(u(n)), st.C};
  for (int i = 0; i < n; ++i) {
    Expr v = st.B[u(i)];
    for (int k = 0; k < n; ++k) {
      v -= st.S(i, k) * g.components[u(k)];
      out.scalar += st.S(i, k) * g.components[u(i)] * g.components[u(k)];
    }
    out.vector[u(i)] = v;
    out.scalar -= Expr(2) * st.B[u(i)] * g.components[u(i)];
  }
  return out;
}

DiffOperator op_conjugate(const DiffOperator& op, const ChartChange& ch) {
  const int n = op.dimension();
  require_dim(n, ch.dimension(), "op_conjugate");
  if (op.order() > 2) throw OrderError("chart conjugation is implemented for order <= 2");
  const ExprMatrix fwd = ch.forward_jacobian();
  const Expr det = ch.forward_det();
  const Expr inv_det = inverse(det);
  std::vector<DiffOperator> images;
  for (int i = 0; i < n; ++i) {
    DiffOperator d(n);
    for (int j = 0; j < n; ++j) d.add_term(key_of(n, {j}), ch.to_target(fwd[u(j)][u(i)]));
    d.add_term(key_of(n, {}, 1), ch.to_target(diff(det, i) * inv_det));
    images.push_back(std::move(d));
  }
  DiffOperator out(n);
  for (const auto& [key, c] : op.terms()) {
    DiffOperator term = DiffOperator::multiplication(n, ch.to_target(c));
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < key.alpha[u(i)]; ++r) term = op_compose(term, images[u(i)]);
    for (const auto& [k, v] : term.terms()) out.add_term(OpKey{k.alpha, k.w + key.w}, v);
  }
  return out;
}

PiSymbols pi_symbols(const Christoffel& gamma) {
  const int n = gamma.dimension();
  const Connection g = gamma.density_connection();
  const Expr scale = Expr(Rational(1, n + 1));
  Christoffel pi(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int m = 0; m <= k; ++m) {
        Expr shift;
        if (i == m) shift += g.components[u(k)];
        if (i == k) shift += g.components[u(m)];
        pi.set(i, k, m, gamma(i, k, m) + scale * shift);
      }
    }
  }
  return PiSymbols(std::move(pi));
}

Christoffel projective_shift(const Christoffel& gamma, std::span<const Expr> t) {
  const int n = gamma.dimension();
  require_dim(n, static_cast<int>(t.size()), "projective_shift");
  Christoffel out(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int m = 0; m <= k; ++m) {
        Expr v = gamma(i, k, m);
        if (i == m) v += t[u(k)];
        if (i == k) v += t[u(m)];
        out.set(i, k, m, v);
      }
    }
  }
  return out;
}

bool christoffel_equal(const Christoffel& a, const Christoffel& b, EqualityPolicy policy) {
  const int n = a.dimension();
  if (n != b.dimension()) return false;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m <= k; ++m)
        if (!expr_equal(a(i, k, m), b(i, k, m), policy)) return false;
  return true;
}

ProjectiveComparison projectively_equivalent(const Christoffel& first, const Christoffel& other,
                                             EqualityPolicy policy) {
  const int n = first.dimension();
  require_dim(n, other.dimension(), "projectively_equivalent");
  ProjectiveComparison out;
  out.equivalent = christoffel_equal(pi_symbols(first).symbols(), pi_symbols(other).symbols(), policy);
  if (!out.equivalent) return out;
  std::vector<Expr> t(u(n));
  for (int k = 0; k < n; ++k) {
    Expr trace;
    for (int i = 0; i < n; ++i) trace += other(i, i, k) - first(i, i, k);
    t[u(k)] = Expr(Rational(1, n + 1)) * trace;
  }
  out.shift = std::move(t);
  return out;
}

ExtendedChristoffel thomas_lift(const PiSymbols& pi) {
  const int n = pi.dimension();
  ExtendedChristoffel out(n);
  const Expr scale = Expr(Rational(1, n + 1));
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m <= k; ++m) {
      for (int i = 0; i < n; ++i) out.set_base(i, k, m, pi(i, k, m));
      Expr v;
      for (int r = 0; r < n; ++r) {
        v += diff(pi(r, k, m), r);
        for (int s = 0; s < n; ++s) v -= pi(r, s, k) * pi(s, r, m);
      }
      out.set_vertical(k, m, scale * v);
    }
  }
  return out;
}

}  // namespace densops
