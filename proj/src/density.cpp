#include "densops/density.hpp"

#include "densops/error.hpp"

namespace densops {

Density Density::term(const Rational& weight, const Expr& coeff) {
  Density d;
  d.add(weight, coeff);
  return d;
}

Expr Density::coefficient(const Rational& weight) const {
  auto it = terms_.find(weight);
  return it == terms_.end() ? Expr() : it->second;
}

void Density::add(const Rational& weight, const Expr& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(weight, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Density& Density::operator+=(const Density& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

Density& Density::operator-=(const Density& o) {
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

Density operator*(const Expr& c, const Density& d) {
  Density out;
  for (const auto& [w, s] : d.terms_) out.add(w, c * s);
  return out;
}

bool operator==(const Density& a, const Density& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  return true;
}

Density density_mul(const Density& a, const Density& b) {
  Density out;
  for (const auto& [wa, sa] : a.terms())
    for (const auto& [wb, sb] : b.terms()) out.add(wa + wb, sa * sb);
  return out;
}

Density weight_op(const Density& d) {
  Density out;
  for (const auto& [w, s] : d.terms()) out.add(w, Expr(w) * s);
  return out;
}

Density density_pullback(const Density& d, const ChartChange& ch) {
  const Expr det = ch.inverse_det();
  bool det_checked = false;
  Density out;
  for (const auto& [w, s] : d.terms()) {
    const Expr moved = ch.to_target(s);
    if (w.is_zero()) {
      out.add(w, moved);
      continue;
    }
    if (!det_checked) {
      for (const auto& y : ch.target_samples())
        if (!(eval(det, y) > 0.0))
          throw DomainError("Jacobian determinant is not positive on the sample domain");
      det_checked = true;
    }
    Expr factor;
    if (auto k = w.to_long()) {
      factor = pow(det, static_cast<int>(*k));
    } else {
      factor = exp(Expr(w) * log(det));
    }
    out.add(w, moved * factor);
  }
  return out;
}

IntegralValue scalar_product(const Density& a, const Density& b, const IntegrationDomain& domain) {
  IntegralValue total{0.0, Rational(0)};
  for (const auto& [wa, sa] : a.terms()) {
    const Expr sb = b.coefficient(Rational(1) - wa);
    if (sb.is_zero()) continue;
    const IntegralValue part = integrate(sa * sb, domain);
    total.value += part.value;
    if (total.exact_factor && part.exact_factor) {
      *total.exact_factor += *part.exact_factor;
    } else {
      total.exact_factor.reset();
    }
  }
  if (domain.kind != IntegrationDomain::Kind::Torus) total.exact_factor.reset();
  return total;
}

bool density_equal(const Density& a, const Density& b, EqualityPolicy policy) {
  const Density diff = a - b;
  for (const auto& [w, s] : diff.terms())
    if (!expr_equal(s, Expr(), policy)) return false;
  return true;
}

std::string to_string(const Density& d, std::span<const std::string> names) {
  if (d.is_zero()) return "0";
  std::string out;
  for (const auto& [w, s] : d.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(s, names) + ")*t^(" + w.to_string() + ")";
  }
  return out;
}

}  // namespace densops
