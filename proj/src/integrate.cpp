#include "densops/integrate.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "densops/error.hpp"

namespace densops {

namespace {

// Mean of sin^a cos^b over one period: (a-1)!!(b-1)!!/(a+b)!! for even a, b; else 0.
Rational sin_cos_mean(int a, int b) {
  if (a % 2 != 0 || b % 2 != 0) return 0;
  const auto double_factorial = [](int k) {
    Rational r(1);
    for (int j = k; j > 1; j -= 2) r *= Rational(j);
    return r;
  };
  return double_factorial(a - 1) * double_factorial(b - 1) / double_factorial(a + b);
}

std::optional<int> plain_coord(const Expr& arg) {
  const auto& ts = arg.terms();
  if (ts.size() != 1 || !ts[0].coeff.is_one() || ts[0].monomial.size() != 1) return std::nullopt;
  const Factor& f = ts[0].monomial[0];
  if (f.atom.kind != AtomKind::Coord || f.exponent != 1) return std::nullopt;
  return f.atom.index;
}

// Integer combination of coordinates plus a constant: 2pi-periodic in every coordinate.
bool is_periodic_phase(const Expr& arg) {
  for (const auto& t : arg.terms()) {
    if (t.monomial.empty()) continue;
    if (t.monomial.size() != 1 || t.monomial[0].atom.kind != AtomKind::Coord ||
        t.monomial[0].exponent != 1 || !t.coeff.is_integer())
      return false;
  }
  return true;
}

bool is_torus_function(const Expr& e) {
  for (const auto& t : e.terms()) {
    for (const auto& f : t.monomial) {
      switch (f.atom.kind) {
        case AtomKind::Coord:
        case AtomKind::Log:
          return false;
        case AtomKind::Sin:
        case AtomKind::Cos:
          if (!is_periodic_phase(f.atom.arg)) return false;
          break;
        case AtomKind::Exp:
        case AtomKind::Base:
          if (!is_torus_function(f.atom.arg)) return false;
          break;
      }
    }
  }
  return true;
}

}  // namespace

IntegrationDomain IntegrationDomain::torus(int dimension) {
  IntegrationDomain d;
  d.kind = Kind::Torus;
  d.dimension = dimension;
  return d;
}

IntegrationDomain IntegrationDomain::box(std::vector<std::pair<double, double>> bounds, int order) {
  IntegrationDomain d;
  d.kind = Kind::Box;
  d.dimension = static_cast<int>(bounds.size());
  d.bounds = std::move(bounds);
  d.order = order;
  return d;
}

std::optional<Rational> torus_mean_exact(const Expr& e) {
  Rational mean;
  for (const auto& t : e.terms()) {
    std::map<int, std::pair<int, int>> powers;  // coordinate -> (sin power, cos power)
    for (const auto& f : t.monomial) {
      if ((f.atom.kind != AtomKind::Sin && f.atom.kind != AtomKind::Cos) || f.exponent < 0) return std::nullopt;
      const auto idx = plain_coord(f.atom.arg);
      if (!idx) return std::nullopt;
      auto& p = powers[*idx];
      (f.atom.kind == AtomKind::Sin ? p.first : p.second) += f.exponent;
    }
    Rational m = t.coeff;
    for (const auto& [idx, p] : powers) m *= sin_cos_mean(p.first, p.second);
    mean += m;
  }
  return mean;
}

double torus_quadrature(const Expr& e, int dimension, int points_per_axis) {
  const double h = 2.0 * std::numbers::pi / points_per_axis;
  std::vector<int> idx(static_cast<std::size_t>(dimension), 0);
  std::vector<double> p(static_cast<std::size_t>(dimension), 0.0);
  double sum = 0.0;
  while (true) {
    for (std::size_t i = 0; i < idx.size(); ++i) p[i] = h * idx[i];
    sum += eval(e, p);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == points_per_axis) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return sum * std::pow(h, dimension);
}

IntegralValue integrate_torus(const Expr& e, int dimension) {
  if (max_coord_index(e) >= dimension) throw IndexError("integrand uses a coordinate outside the torus");
  if (contains(e, AtomKind::Log) || has_negative_powers(e))
    throw IntegrationError("integrand may be unbounded on the torus (log or negative powers)");
  if (!is_torus_function(e)) throw IntegrationError("integrand is not 2pi-periodic in every coordinate");
  const double volume = std::pow(2.0 * std::numbers::pi, dimension);
  if (auto mean = torus_mean_exact(e)) return IntegralValue{mean->to_double() * volume, *mean};
  return IntegralValue{torus_quadrature(e, dimension), std::nullopt};
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
  if (order < 1) throw Error("quadrature order must be positive");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  std::vector<double> nodes(static_cast<std::size_t>(order));
  std::vector<double> weights(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    const double v = solver.eigenvectors()(0, k);
    weights[static_cast<std::size_t>(k)] = 2.0 * v * v;
  }
  return {nodes, weights};
}

double integrate_box(const Expr& e, const IntegrationDomain& box) {
  const int n = box.dimension;
  if (max_coord_index(e) >= n) throw IndexError("integrand uses a coordinate outside the box");
  const auto [nodes, weights] = gauss_legendre(box.order);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> p(static_cast<std::size_t>(n));
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto [lo, hi] = box.bounds[i];
      const double half = 0.5 * (hi - lo);
      p[i] = lo + half * (nodes[static_cast<std::size_t>(idx[i])] + 1.0);
      w *= half * weights[static_cast<std::size_t>(idx[i])];
    }
    sum += w * eval(e, p);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == box.order) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return sum;
}

IntegralValue integrate(const Expr& e, const IntegrationDomain& domain) {
  if (domain.kind == IntegrationDomain::Kind::Torus) return integrate_torus(e, domain.dimension);
  return IntegralValue{integrate_box(e, domain), std::nullopt};
}

}  // namespace densops
