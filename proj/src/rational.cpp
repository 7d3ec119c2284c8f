#include "densops/rational.hpp"

#include <map>
#include <stdexcept>

namespace densops {

Rational::Rational(long value) : v_(value) {}

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  const auto is_int = [](std::string_view t) {
    if (!t.empty() && (t.front() == '-' || t.front() == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+')
    throw std::invalid_argument("malformed rational literal '" + s + "'");
  mpq_class v;
  v.get_num() = mpz_class(num.front() == '+' ? num.substr(1) : num);
  v.get_den() = mpz_class(den);
  if (v.get_den() == 0) throw std::domain_error("rational with zero denominator");
  return Rational(std::move(v));
}

std::optional<long> Rational::to_long() const {
  if (!is_integer() || !v_.get_num().fits_slong_p()) return std::nullopt;
  return v_.get_num().get_si();
}

std::optional<std::vector<std::pair<long, int>>> Rational::factorize() const {
  if (sign() <= 0 || !v_.get_num().fits_slong_p() || !v_.get_den().fits_slong_p()) return std::nullopt;
  std::map<long, int> powers;
  auto split = [&powers](long x, int sign) {
    for (long p = 2; p < 1000000 && p * p <= x; ++p) {
      while (x % p == 0) {
        powers[p] += sign;
        x /= p;
      }
    }
    if (x > 1) powers[x] += sign;
  };
  split(v_.get_num().get_si(), 1);
  split(v_.get_den().get_si(), -1);
  std::vector<std::pair<long, int>> out;
  for (const auto& [p, e] : powers)
    if (e != 0) out.emplace_back(p, e);
  return out;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  return Rational(mpq_class(1 / v_));
}

Rational Rational::pow(int exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(mpq_class(num, den));
}

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

}  // namespace densops
