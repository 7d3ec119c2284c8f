#include "densops/operator.hpp"

#include <functional>
#include <numeric>

#include "densops/error.hpp"

namespace densops {

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// Calls fn(gamma, binomial(alpha, gamma)) for every multi-index gamma <= alpha.
void for_each_sub_index(const std::vector<int>& alpha, const std::function<void(const std::vector<int>&, long)>& fn) {
  std::vector<int> gamma(alpha.size(), 0);
  while (true) {
    long c = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i) c *= binomial(alpha[i], gamma[i]);
    fn(gamma, c);
    std::size_t i = 0;
    while (i < gamma.size() && gamma[i] == alpha[i]) gamma[i++] = 0;
    if (i == gamma.size()) return;
    ++gamma[i];
  }
}

// Memoised partial derivatives of one coefficient.
class DerivativeCache {
 public:
  explicit DerivativeCache(Expr base) { cache_[{}] = std::move(base); }

  const Expr& get(const std::vector<int>& gamma) {
    std::vector<int> key = gamma;
    while (!key.empty() && key.back() == 0) key.pop_back();
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<int> parent = key;
    std::size_t i = 0;
    while (parent[i] == 0) ++i;
    --parent[i];
    Expr d = diff(get(parent), static_cast<int>(i));
    return cache_.emplace(std::move(key), std::move(d)).first->second;
  }

 private:
  std::map<std::vector<int>, Expr> cache_;
};

std::vector<int> add_index(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

std::vector<int> sub_index(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

int abs_index(const std::vector<int>& a) { return std::accumulate(a.begin(), a.end(), 0); }

void require_same_dimension(const DiffOperator& a, const DiffOperator& b) {
  if (a.dimension() != b.dimension()) throw Error("operators live on charts of different dimension");
}

}  // namespace

int OpKey::order() const { return abs_index(alpha) + w; }

bool OpKeyLess::operator()(const OpKey& a, const OpKey& b) const {
  const int oa = a.order();
  const int ob = b.order();
  if (oa != ob) return oa < ob;
  if (a.alpha != b.alpha) return a.alpha > b.alpha;
  return a.w < b.w;
}

OpKey key_of(int dimension, std::initializer_list<int> derivative_indices, int w) {
  OpKey k{std::vector<int>(static_cast<std::size_t>(dimension), 0), w};
  for (int i : derivative_indices) {
    if (i < 0 || i >= dimension) throw IndexError("derivative index outside chart");
    ++k.alpha[static_cast<std::size_t>(i)];
  }
  return k;
}

DiffOperator::DiffOperator(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw Error("operator dimension must be positive");
}

DiffOperator DiffOperator::multiplication(int dimension, const Expr& c) {
  DiffOperator op(dimension);
  op.add_term(key_of(dimension, {}), c);
  return op;
}

DiffOperator DiffOperator::partial(int dimension, int index) {
  DiffOperator op(dimension);
  op.add_term(key_of(dimension, {index}), Expr(1));
  return op;
}

DiffOperator DiffOperator::weight(int dimension) {
  DiffOperator op(dimension);
  op.add_term(key_of(dimension, {}, 1), Expr(1));
  return op;
}

int DiffOperator::order() const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, k.order());
  return m;
}

int DiffOperator::weight_degree() const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, k.w);
  return m;
}

Expr DiffOperator::coefficient(const OpKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Expr() : it->second;
}

void DiffOperator::add_term(const OpKey& key, const Expr& coeff) {
  if (static_cast<int>(key.alpha.size()) != dimension_) throw IndexError("multi-index length differs from chart");
  if (key.w < 0) throw Error("negative power of the weight operator");
  for (int a : key.alpha)
    if (a < 0) throw Error("negative derivative multi-index");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffOperator& DiffOperator::operator+=(const DiffOperator& o) {
  require_same_dimension(*this, o);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

DiffOperator& DiffOperator::operator-=(const DiffOperator& o) {
  require_same_dimension(*this, o);
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

DiffOperator operator-(const DiffOperator& a) { return Expr(-1) * a; }

DiffOperator operator*(const Expr& c, const DiffOperator& op) {
  DiffOperator out(op.dimension());
  for (const auto& [k, v] : op.terms_) out.add_term(k, c * v);
  return out;
}

bool operator==(const DiffOperator& a, const DiffOperator& b) {
  if (a.dimension_ != b.dimension_ || a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
    if (!(ia->first == ib->first) || !(ia->second == ib->second)) return false;
  return true;
}

Density op_apply(const DiffOperator& op, const Density& d) {
  Density out;
  for (const auto& [weight, s] : d.terms()) {
    DerivativeCache derivs(s);
    Expr acc;
    for (const auto& [key, c] : op.terms()) {
      if (key.w > 0 && weight.is_zero()) continue;
      const Expr& ds = derivs.get(key.alpha);
      if (ds.is_zero()) continue;
      acc += Expr(weight.pow(key.w)) * c * ds;
    }
    out.add(weight, acc);
  }
  return out;
}

DiffOperator op_compose(const DiffOperator& a, const DiffOperator& b) {
  require_same_dimension(a, b);
  DiffOperator out(a.dimension());
  std::vector<DerivativeCache> caches;
  caches.reserve(b.terms().size());
  for (const auto& [kb, cb] : b.terms()) caches.emplace_back(cb);
  for (const auto& [ka, ca] : a.terms()) {
    std::size_t j = 0;
    for (const auto& [kb, cb] : b.terms()) {
      DerivativeCache& cache = caches[j++];
      // d^alpha o c = sum_gamma binom(alpha, gamma) (d^gamma c) d^(alpha - gamma)
      for_each_sub_index(ka.alpha, [&](const std::vector<int>& gamma, long binom) {
        const Expr& dc = cache.get(gamma);
        if (dc.is_zero()) return;
        OpKey key{add_index(sub_index(ka.alpha, gamma), kb.alpha), ka.w + kb.w};
        out.add_term(key, Expr(binom) * ca * dc);
      });
    }
  }
  return out;
}

DiffOperator op_adjoint(const DiffOperator& op) {
  DiffOperator out(op.dimension());
  for (const auto& [key, c] : op.terms()) {
    // (c d^alpha w^k)* = (1 - w)^k o (-1)^|alpha| d^alpha o c
    const long sign = abs_index(key.alpha) % 2 == 0 ? 1 : -1;
    DerivativeCache cache(c);
    for_each_sub_index(key.alpha, [&](const std::vector<int>& gamma, long binom) {
      const Expr& dc = cache.get(gamma);
      if (dc.is_zero()) return;
      const std::vector<int> rest = sub_index(key.alpha, gamma);
      for (int j = 0; j <= key.w; ++j) {
        const long wcoef = binomial(key.w, j) * (j % 2 == 0 ? 1 : -1);
        out.add_term(OpKey{rest, j}, Expr(sign * binom * wcoef) * dc);
      }
    });
  }
  return out;
}

DiffOperator restrict(const DiffOperator& op, const Rational& lambda) {
  DiffOperator out(op.dimension());
  for (const auto& [key, c] : op.terms()) {
    if (key.w > 0 && lambda.is_zero()) continue;
    out.add_term(OpKey{key.alpha, 0}, Expr(lambda.pow(key.w)) * c);
  }
  return out;
}

bool op_equal(const DiffOperator& a, const DiffOperator& b, EqualityPolicy policy) {
  if (a.dimension() != b.dimension()) return false;
  const DiffOperator d = a - b;
  for (const auto& [key, c] : d.terms())
    if (!expr_equal(c, Expr(), policy)) return false;
  return true;
}

bool is_self_adjoint(const DiffOperator& op, EqualityPolicy policy) {
  return op_equal(op, op_adjoint(op), policy);
}

Expr divergence_hat(const DiffOperator& k) {
  Expr div;
  for (const auto& [key, c] : k.terms()) {
    const int da = abs_index(key.alpha);
    if (da == 1 && key.w == 0) {
      const auto i = static_cast<int>(std::find(key.alpha.begin(), key.alpha.end(), 1) - key.alpha.begin());
      div += diff(c, i);
    } else if (da == 0 && key.w == 1) {
      div -= c;
    } else {
      throw OrderError("divergence needs a vector field K^i d_i + K^0 w with K(1) = 0");
    }
  }
  return div;
}

ExprMatrix SymmetricMatrix::to_matrix() const {
  ExprMatrix m(static_cast<std::size_t>(n_), std::vector<Expr>(static_cast<std::size_t>(n_)));
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = (*this)(i, k);
  return m;
}

bool symbol_equal(const SymbolTriple& a, const SymbolTriple& b, EqualityPolicy policy) {
  const int n = a.dimension();
  if (n != b.dimension()) return false;
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k)
      if (!expr_equal(a.S(i, k), b.S(i, k), policy)) return false;
    if (!expr_equal(a.B[static_cast<std::size_t>(i)], b.B[static_cast<std::size_t>(i)], policy)) return false;
  }
  return expr_equal(a.C, b.C, policy);
}

SymbolTriple extract_symbol(const DiffOperator& op) {
  if (op.order() > 2) throw OrderError("principal symbol extraction needs order <= 2, got " + std::to_string(op.order()));
  const int n = op.dimension();
  SymbolTriple st(n);
  const Rational half(1, 2);
  for (int i = 0; i < n; ++i) {
    st.S.set(i, i, op.coefficient(key_of(n, {i, i})));
    for (int k = i + 1; k < n; ++k) st.S.set(i, k, Expr(half) * op.coefficient(key_of(n, {i, k})));
    st.B[static_cast<std::size_t>(i)] = Expr(half) * op.coefficient(key_of(n, {i}, 1));
  }
  st.C = op.coefficient(key_of(n, {}, 2));
  return st;
}

DiffOperator build_canonical(const SymbolTriple& st) {
  const int n = st.dimension();
  DiffOperator op(n);
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (int k = 0; k < n; ++k) op.add_term(key_of(n, {i, k}), st.S(i, k));
    Expr div_s;
    for (int k = 0; k < n; ++k) div_s += diff(st.S(k, i), k);
    op.add_term(key_of(n, {i}), div_s - st.B[ui]);
    op.add_term(key_of(n, {i}, 1), Expr(2) * st.B[ui]);
    op.add_term(key_of(n, {}, 1), diff(st.B[ui], i));
  }
  op.add_term(key_of(n, {}, 2), st.C);
  op.add_term(key_of(n, {}, 1), -st.C);
  return op;
}

std::string to_string(const DiffOperator& op, std::span<const std::string> names) {
  if (op.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : op.terms()) {
    std::string symbols;
    for (std::size_t i = 0; i < key.alpha.size(); ++i) {
      if (key.alpha[i] == 0) continue;
      if (!symbols.empty()) symbols += "*";
      symbols += "d" + std::to_string(i + 1);
      if (key.alpha[i] > 1) symbols += "^" + std::to_string(key.alpha[i]);
    }
    if (key.w > 0) {
      if (!symbols.empty()) symbols += "*";
      symbols += "w";
      if (key.w > 1) symbols += "^" + std::to_string(key.w);
    }
    bool negative = false;
    std::string coeff;
    if (c.terms().size() == 1) {
      negative = c.terms().front().coeff.sign() < 0;
      const Expr mag = negative ? -c : c;
      if (!(mag == Expr(1)) || symbols.empty()) coeff = to_string(mag, names);
    } else {
      coeff = "(" + to_string(c, names) + ")";
    }
    std::string body = coeff;
    if (!symbols.empty()) body += body.empty() ? symbols : "*" + symbols;
    if (first) {
      out += negative ? "-" + body : body;
    } else {
      out += (negative ? " - " : " + ") + body;
    }
    first = false;
  }
  return out;
}

}  // namespace densops
