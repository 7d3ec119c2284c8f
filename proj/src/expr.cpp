#include "densops/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <utility>

#include "densops/error.hpp"

namespace densops {

struct ExprAccess {
  static Expr make(std::vector<Term> terms) {
    return Expr(std::make_shared<const std::vector<Term>>(std::move(terms)));
  }
  static Expr single(const Rational& c, Monomial m) {
    if (c.is_zero()) return {};
    std::vector<Term> terms;
    terms.push_back(Term{std::move(m), c});
    return make(std::move(terms));
  }
};

namespace {

const std::shared_ptr<const std::vector<Term>>& empty_terms() {
  static const auto empty = std::make_shared<const std::vector<Term>>();
  return empty;
}

Expr atom_expr(AtomKind kind, Expr arg) {
  return ExprAccess::single(1, Monomial{Factor{Atom{kind, -1, std::move(arg)}, 1}});
}

int degree(const Monomial& m) {
  int d = 0;
  for (const auto& f : m) d += f.exponent;
  return d;
}

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

class Accumulator {
 public:
  void add(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  void add(const Expr& e, const Rational& scale = 1) {
    for (const auto& t : e.terms()) add(t.monomial, t.coeff * scale);
  }
  Expr finish() {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& [m, c] : terms_) out.push_back(Term{m, c});
    return ExprAccess::make(std::move(out));
  }

 private:
  std::map<Monomial, Rational, MonomialLess> terms_;
};

Expr scaled(const Expr& e, const Rational& c) {
  if (c.is_zero() || e.is_zero()) return {};
  if (c.is_one()) return e;
  std::vector<Term> out = e.terms();
  for (auto& t : out) t.coeff *= c;
  return ExprAccess::make(std::move(out));
}

// Normalises c * prod(factors) into canonical form. Factors may be unsorted and repeated.
Expr make_term(const Rational& c, Monomial factors) {
  if (c.is_zero()) return {};
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return compare(a.atom, b.atom) < 0; });
  Monomial merged;
  merged.reserve(factors.size());
  for (auto& f : factors) {
    if (!merged.empty() && compare(merged.back().atom, f.atom) == 0) {
      merged.back().exponent += f.exponent;
    } else {
      merged.push_back(std::move(f));
    }
  }
  std::erase_if(merged, [](const Factor& f) { return f.exponent == 0; });

  int exp_count = 0;
  bool exp_unit = true;
  for (const auto& f : merged) {
    if (f.atom.kind == AtomKind::Exp) {
      ++exp_count;
      exp_unit = exp_unit && f.exponent == 1;
    }
  }
  const bool keep_exp = exp_count == 1 && exp_unit;

  Monomial rest;
  std::vector<Expr> extra;
  Expr exp_arg;
  for (auto& f : merged) {
    switch (f.atom.kind) {
      case AtomKind::Exp:
        if (keep_exp) {
          rest.push_back(std::move(f));
        } else {
          exp_arg += scaled(f.atom.arg, f.exponent);
        }
        break;
      case AtomKind::Base:
        if (f.exponent > 0) {
          extra.push_back(pow(f.atom.arg, f.exponent));
        } else {
          rest.push_back(std::move(f));
        }
        break;
      case AtomKind::Sin:
        if (f.exponent >= 2) {
          const Expr c2 = pow(atom_expr(AtomKind::Cos, f.atom.arg), 2);
          extra.push_back(pow(Expr(1) - c2, f.exponent / 2));
          if (f.exponent % 2 != 0) rest.push_back(Factor{f.atom, 1});
        } else {
          rest.push_back(std::move(f));
        }
        break;
      default:
        rest.push_back(std::move(f));
    }
  }
  Expr result = ExprAccess::single(c, std::move(rest));
  if (exp_count > 0 && !keep_exp) result *= exp(exp_arg);
  for (const auto& e : extra) result *= e;
  return result;
}

Monomial concat(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.reserve(a.size() + b.size());
  m.insert(m.end(), a.begin(), a.end());
  m.insert(m.end(), b.begin(), b.end());
  return m;
}

bool needs_normalising(const Monomial& a, const Monomial& b) {
  // Concatenation of two canonical monomials is canonical when the atom sets are
  // disjoint and the merge introduces neither a second exp nor a sin^2.
  int exps = 0;
  for (const auto& f : a)
    if (f.atom.kind == AtomKind::Exp) ++exps;
  for (const auto& f : b)
    if (f.atom.kind == AtomKind::Exp) ++exps;
  if (exps > 1) return true;
  for (const auto& fa : a)
    for (const auto& fb : b)
      if (compare(fa.atom, fb.atom) == 0) return true;
  return false;
}

Monomial merge_sorted(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m),
             [](const Factor& x, const Factor& y) { return compare(x.atom, y.atom) < 0; });
  return m;
}

Expr map_coords(const Expr& e, const std::function<Expr(int)>& coord_fn);

Expr map_atom(const Atom& a, const std::function<Expr(int)>& coord_fn) {
  switch (a.kind) {
    case AtomKind::Coord:
      return coord_fn(a.index);
    case AtomKind::Sin:
      return sin(map_coords(a.arg, coord_fn));
    case AtomKind::Cos:
      return cos(map_coords(a.arg, coord_fn));
    case AtomKind::Exp:
      return exp(map_coords(a.arg, coord_fn));
    case AtomKind::Log:
      return log(map_coords(a.arg, coord_fn));
    case AtomKind::Base:
      return map_coords(a.arg, coord_fn);
  }
  return {};
}

Expr map_coords(const Expr& e, const std::function<Expr(int)>& coord_fn) {
  Accumulator acc;
  for (const auto& t : e.terms()) {
    Expr prod(t.coeff);
    for (const auto& f : t.monomial) prod *= pow(map_atom(f.atom, coord_fn), f.exponent);
    acc.add(prod);
  }
  return acc.finish();
}

Expr diff_atom(const Atom& a, int index) {
  switch (a.kind) {
    case AtomKind::Coord:
      return a.index == index ? Expr(1) : Expr();
    case AtomKind::Sin: {
      const Expr d = diff(a.arg, index);
      return d.is_zero() ? Expr() : cos(a.arg) * d;
    }
    case AtomKind::Cos: {
      const Expr d = diff(a.arg, index);
      return d.is_zero() ? Expr() : -(sin(a.arg) * d);
    }
    case AtomKind::Exp: {
      const Expr d = diff(a.arg, index);
      return d.is_zero() ? Expr() : atom_expr(AtomKind::Exp, a.arg) * d;
    }
    case AtomKind::Log: {
      const Expr d = diff(a.arg, index);
      return d.is_zero() ? Expr() : d * inverse(a.arg);
    }
    case AtomKind::Base:
      return diff(a.arg, index);
  }
  return {};
}

double eval_atom(const Atom& a, std::span<const double> point) {
  switch (a.kind) {
    case AtomKind::Coord:
      if (a.index >= static_cast<int>(point.size()))
        throw IndexError("coordinate x" + std::to_string(a.index + 1) +
                         " outside evaluation point of dimension " + std::to_string(point.size()));
      return point[static_cast<std::size_t>(a.index)];
    case AtomKind::Sin:
      return std::sin(eval(a.arg, point));
    case AtomKind::Cos:
      return std::cos(eval(a.arg, point));
    case AtomKind::Exp:
      return std::exp(eval(a.arg, point));
    case AtomKind::Log: {
      const double v = eval(a.arg, point);
      if (!(v > 0.0)) throw DomainError("log of non-positive value " + std::to_string(v));
      return std::log(v);
    }
    case AtomKind::Base:
      return eval(a.arg, point);
  }
  return 0.0;
}

std::string atom_string(const Atom& a, std::span<const std::string> names) {
  switch (a.kind) {
    case AtomKind::Coord:
      if (a.index < static_cast<int>(names.size())) return names[static_cast<std::size_t>(a.index)];
      return "x" + std::to_string(a.index + 1);
    case AtomKind::Sin:
      return "sin(" + to_string(a.arg, names) + ")";
    case AtomKind::Cos:
      return "cos(" + to_string(a.arg, names) + ")";
    case AtomKind::Exp:
      return "exp(" + to_string(a.arg, names) + ")";
    case AtomKind::Log:
      return "log(" + to_string(a.arg, names) + ")";
    case AtomKind::Base:
      return "(" + to_string(a.arg, names) + ")";
  }
  return {};
}

}  // namespace

Expr::Expr() : terms_(empty_terms()) {}

Expr::Expr(const Rational& value) : terms_(empty_terms()) {
  if (!value.is_zero()) *this = ExprAccess::single(value, {});
}

Expr::Expr(long value) : Expr(Rational(value)) {}

Expr Expr::coord(int index) {
  if (index < 0) throw IndexError("negative coordinate index");
  return ExprAccess::single(1, Monomial{Factor{Atom{AtomKind::Coord, index, Expr()}, 1}});
}

bool Expr::is_zero() const { return terms_->empty(); }

std::optional<Rational> Expr::constant_value() const {
  if (terms_->empty()) return Rational(0);
  if (terms_->size() == 1 && terms_->front().monomial.empty()) return terms_->front().coeff;
  return std::nullopt;
}

const std::vector<Term>& Expr::terms() const { return *terms_; }

Expr& Expr::operator+=(const Expr& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  Accumulator acc;
  acc.add(*this);
  acc.add(o);
  return *this = acc.finish();
}

Expr& Expr::operator-=(const Expr& o) { return *this += -o; }

Expr& Expr::operator*=(const Expr& o) {
  if (is_zero() || o.is_zero()) return *this = Expr();
  if (auto c = o.constant_value()) return *this = scaled(*this, *c);
  if (auto c = constant_value()) return *this = scaled(o, *c);
  Accumulator acc;
  for (const auto& ta : terms()) {
    for (const auto& tb : o.terms()) {
      const Rational c = ta.coeff * tb.coeff;
      if (needs_normalising(ta.monomial, tb.monomial)) {
        acc.add(make_term(c, concat(ta.monomial, tb.monomial)));
      } else {
        acc.add(merge_sorted(ta.monomial, tb.monomial), c);
      }
    }
  }
  return *this = acc.finish();
}

Expr& Expr::operator/=(const Expr& o) { return *this *= inverse(o); }

Expr operator-(const Expr& a) { return scaled(a, -1); }

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

int compare(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  return compare(a.arg, b.arg);
}

int compare(const Monomial& a, const Monomial& b) {
  const int da = degree(a);
  const int db = degree(b);
  if (da != db) return da > db ? -1 : 1;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(a[i].atom, b[i].atom); c != 0) return c;
    if (a[i].exponent != b[i].exponent) return a[i].exponent > b[i].exponent ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int compare(const Expr& a, const Expr& b) {
  if (&a.terms() == &b.terms()) return 0;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (int c = compare(ta[i].monomial, tb[i].monomial); c != 0) return c;
    if (ta[i].coeff != tb[i].coeff) return ta[i].coeff < tb[i].coeff ? -1 : 1;
  }
  return 0;
}

Expr sin(const Expr& e) {
  if (e.is_zero()) return {};
  if (e.terms().front().coeff.sign() < 0) return -atom_expr(AtomKind::Sin, -e);
  return atom_expr(AtomKind::Sin, e);
}

Expr cos(const Expr& e) {
  if (e.is_zero()) return Expr(1);
  if (e.terms().front().coeff.sign() < 0) return atom_expr(AtomKind::Cos, -e);
  return atom_expr(AtomKind::Cos, e);
}

Expr exp(const Expr& e) {
  if (e.is_zero()) return Expr(1);
  Accumulator rest;
  Expr pulled(1);
  for (const auto& t : e.terms()) {
    const auto& m = t.monomial;
    if (m.size() == 1 && m[0].atom.kind == AtomKind::Log && m[0].exponent == 1 &&
        t.coeff.is_integer()) {
      if (auto k = t.coeff.to_long()) {
        pulled *= pow(m[0].atom.arg, static_cast<int>(*k));
        continue;
      }
    }
    rest.add(m, t.coeff);
  }
  Expr remaining = rest.finish();
  if (remaining.is_zero()) return pulled;
  return pulled * atom_expr(AtomKind::Exp, remaining);
}

Expr log(const Expr& e) {
  if (auto c = e.constant_value()) {
    if (c->is_one()) return {};
    const auto factors = c->factorize();
    if (!factors) return atom_expr(AtomKind::Log, e);
    if (factors->size() == 1 && factors->front().second == 1) return atom_expr(AtomKind::Log, e);
    Expr sum;
    for (const auto& [p, k] : *factors) sum += Expr(k) * atom_expr(AtomKind::Log, Expr(p));
    return sum;
  }
  const auto& ts = e.terms();
  if (ts.size() > 1 && ts.front().coeff.sign() > 0 && !ts.front().coeff.is_one()) {
    return log(Expr(ts.front().coeff)) + log(scaled(e, ts.front().coeff.inverse()));
  }
  if (ts.size() == 1 && ts[0].coeff.is_one() && ts[0].monomial.size() == 1 &&
      ts[0].monomial[0].atom.kind == AtomKind::Exp && ts[0].monomial[0].exponent == 1) {
    return ts[0].monomial[0].atom.arg;
  }
  // log of a positive single-term product splits into a sum of logs of its factors
  if (ts.size() == 1 && ts[0].coeff.sign() > 0 &&
      (ts[0].monomial.size() > 1 || ts[0].monomial[0].exponent != 1 || !ts[0].coeff.is_one())) {
    Expr sum = log(Expr(ts[0].coeff));
    for (const auto& f : ts[0].monomial) {
      const Expr base = f.atom.kind == AtomKind::Base ? f.atom.arg
                                                       : ExprAccess::single(Rational(1), Monomial{Factor{f.atom, 1}});
      sum += Expr(f.exponent) * log(base);
    }
    return sum;
  }
  return atom_expr(AtomKind::Log, e);
}

Expr pow(const Expr& e, int exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent < 0) return pow(inverse(e), -exponent);
  if (exponent == 1) return e;
  Expr result(1);
  Expr base = e;
  unsigned k = static_cast<unsigned>(exponent);
  while (k > 0) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k > 0) base *= base;
  }
  return result;
}

Expr inverse(const Expr& e) {
  if (e.is_zero()) throw DomainError("division by zero expression");
  const auto& ts = e.terms();
  if (ts.size() == 1) {
    Monomial m = ts[0].monomial;
    for (auto& f : m) f.exponent = -f.exponent;
    return make_term(ts[0].coeff.inverse(), std::move(m));
  }
  const Rational lead = ts.front().coeff;
  const Expr monic = scaled(e, lead.inverse());
  return ExprAccess::single(lead.inverse(), Monomial{Factor{Atom{AtomKind::Base, -1, monic}, -1}});
}

Expr diff(const Expr& e, int index) {
  if (index < 0) throw IndexError("negative coordinate index");
  Accumulator acc;
  for (const auto& t : e.terms()) {
    for (std::size_t j = 0; j < t.monomial.size(); ++j) {
      const Factor& f = t.monomial[j];
      const Expr d = diff_atom(f.atom, index);
      if (d.is_zero()) continue;
      Monomial rest = t.monomial;
      rest[j].exponent -= 1;
      acc.add(make_term(t.coeff * Rational(f.exponent), std::move(rest)) * d);
    }
  }
  return acc.finish();
}

Expr simplify(const Expr& e) {
  return map_coords(e, [](int i) { return Expr::coord(i); });
}

Expr substitute(const Expr& e, std::span<const Expr> values) {
  return map_coords(e, [&](int i) {
    if (i >= static_cast<int>(values.size()))
      throw IndexError("no substitution for coordinate x" + std::to_string(i + 1));
    return values[static_cast<std::size_t>(i)];
  });
}

double eval(const Expr& e, std::span<const double> point) {
  double sum = 0.0;
  for (const auto& t : e.terms()) {
    double v = t.coeff.to_double();
    for (const auto& f : t.monomial) {
      const double a = eval_atom(f.atom, point);
      v *= f.exponent == 1 ? a : std::pow(a, f.exponent);
    }
    sum += v;
  }
  return sum;
}

int max_coord_index(const Expr& e) {
  int m = -1;
  for (const auto& t : e.terms()) {
    for (const auto& f : t.monomial) {
      if (f.atom.kind == AtomKind::Coord) {
        m = std::max(m, f.atom.index);
      } else {
        m = std::max(m, max_coord_index(f.atom.arg));
      }
    }
  }
  return m;
}

bool contains(const Expr& e, AtomKind kind) {
  for (const auto& t : e.terms())
    for (const auto& f : t.monomial)
      if (f.atom.kind == kind || contains(f.atom.arg, kind)) return true;
  return false;
}

bool has_negative_powers(const Expr& e) {
  for (const auto& t : e.terms())
    for (const auto& f : t.monomial)
      if (f.exponent < 0 || has_negative_powers(f.atom.arg)) return true;
  return false;
}

bool is_zero_symbolic(const Expr& e) {
  Expr cur = e;
  for (int round = 0; round < 16; ++round) {
    if (cur.is_zero()) return true;
    std::map<Monomial, int, MonomialLess> denominators;
    for (const auto& t : cur.terms()) {
      for (const auto& f : t.monomial) {
        if (f.exponent >= 0 || f.atom.kind == AtomKind::Exp) continue;
        Monomial key{Factor{f.atom, 1}};
        int& k = denominators[key];
        k = std::max(k, -f.exponent);
      }
    }
    if (denominators.empty()) return false;
    Monomial clear;
    for (const auto& [key, k] : denominators) clear.push_back(Factor{key[0].atom, k});
    Accumulator acc;
    for (const auto& t : cur.terms()) acc.add(make_term(t.coeff, concat(t.monomial, clear)));
    cur = acc.finish();
  }
  return cur.is_zero();
}

bool expr_equal(const Expr& a, const Expr& b, EqualityPolicy policy) {
  if (policy != EqualityPolicy::Numeric) {
    if (a == b || is_zero_symbolic(a - b)) return true;
    if (policy == EqualityPolicy::Symbolic) return false;
  }
  const int n = std::max({max_coord_index(a), max_coord_index(b), 0}) + 1;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::vector<double> p(static_cast<std::size_t>(n));
  int accepted = 0;
  for (int draw = 0; draw < 256 && accepted < kNumericEqualityPoints; ++draw) {
    for (auto& x : p) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    double va = 0.0;
    double vb = 0.0;
    try {
      va = eval(a, p);
      vb = eval(b, p);
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(va) || !std::isfinite(vb)) continue;
    if (!(std::abs(va - vb) < kNumericEqualityTolerance * (1.0 + std::abs(va)))) return false;
    ++accepted;
  }
  return accepted >= kNumericEqualityPoints;
}

std::string to_string(const Expr& e, std::span<const std::string> names) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    const bool negative = t.coeff.sign() < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const Rational mag = t.coeff.abs();
    std::string body;
    if (t.monomial.empty() || !mag.is_one()) body = mag.to_string();
    for (const auto& f : t.monomial) {
      if (!body.empty()) body += "*";
      body += atom_string(f.atom, names);
      if (f.exponent != 1) body += "^" + std::to_string(f.exponent);
    }
    out += body;
  }
  return out;
}

}  // namespace densops
