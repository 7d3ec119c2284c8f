#include "densops/chart.hpp"

#include <cmath>
#include <random>
#include <set>

#include "densops/error.hpp"

namespace densops {

Chart::Chart(int dimension) {
  if (dimension < 1) throw Error("chart dimension must be positive");
  for (int i = 0; i < dimension; ++i) names_.push_back("x" + std::to_string(i + 1));
}

Chart::Chart(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error("chart dimension must be positive");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw Error("chart coordinate names must be distinct");
}

std::optional<int> Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

void Chart::require_index(int index) const {
  if (index < 0 || index >= dimension())
    throw IndexError("coordinate index " + std::to_string(index + 1) + " outside chart of dimension " +
                     std::to_string(dimension()));
}

Expr determinant(const ExprMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Expr(1);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Expr det;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    ExprMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expr> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    const Expr term = m[0][j] * determinant(minor);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

ExprMatrix adjugate(const ExprMatrix& m) {
  const std::size_t n = m.size();
  ExprMatrix adj(n, std::vector<Expr>(n));
  if (n == 1) {
    adj[0][0] = Expr(1);
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      ExprMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<Expr> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != j) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      const Expr cof = determinant(minor);
      adj[j][i] = ((i + j) % 2 == 0) ? cof : -cof;
    }
  }
  return adj;
}

ExprMatrix jacobian(std::span<const Expr> map, int dimension) {
  ExprMatrix j(map.size(), std::vector<Expr>(static_cast<std::size_t>(dimension)));
  for (std::size_t a = 0; a < map.size(); ++a)
    for (int i = 0; i < dimension; ++i) j[a][static_cast<std::size_t>(i)] = diff(map[a], i);
  return j;
}

std::vector<Point> default_samples(int dimension, int count) {
  std::mt19937_64 rng(0xc0ffee123ULL + static_cast<unsigned>(dimension));
  std::vector<Point> pts;
  for (int k = 0; k < count; ++k) {
    Point p(static_cast<std::size_t>(dimension));
    for (auto& x : p) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    pts.push_back(std::move(p));
  }
  return pts;
}

ChartChange::ChartChange(std::vector<Expr> forward, std::vector<Expr> inverse)
    : ChartChange(forward, inverse, default_samples(static_cast<int>(forward.size()))) {}

ChartChange::ChartChange(std::vector<Expr> forward, std::vector<Expr> inverse,
                         std::vector<Point> source_samples)
    : forward_(std::move(forward)), inverse_(std::move(inverse)), source_samples_(std::move(source_samples)) {
  const int n = dimension();
  if (n < 1 || static_cast<int>(inverse_.size()) != n)
    throw Error("chart change needs n forward and n inverse components");
  for (const auto& e : forward_)
    if (max_coord_index(e) >= n) throw IndexError("forward map uses a coordinate outside the chart");
  for (const auto& e : inverse_)
    if (max_coord_index(e) >= n) throw IndexError("inverse map uses a coordinate outside the chart");
  const Expr det = forward_det();
  for (const auto& x : source_samples_) {
    Point y = map_point(x);
    for (int i = 0; i < n; ++i) {
      const double back = eval(inverse_[static_cast<std::size_t>(i)], y);
      const double xi = x[static_cast<std::size_t>(i)];
      if (!(std::abs(back - xi) < 1e-9 * (1.0 + std::abs(xi))))
        throw Error("inverse map does not invert the forward map at a sample point");
    }
    if (!(std::abs(eval(det, x)) > 1e-12)) throw DomainError("chart change Jacobian vanishes at a sample point");
    target_samples_.push_back(std::move(y));
  }
}

ChartChange ChartChange::identity(int dimension) {
  std::vector<Expr> id;
  for (int i = 0; i < dimension; ++i) id.push_back(Expr::coord(i));
  return ChartChange(id, id);
}

Point ChartChange::map_point(const Point& x) const {
  Point y;
  y.reserve(forward_.size());
  for (const auto& f : forward_) y.push_back(eval(f, x));
  return y;
}

ChartChange ChartChange::inverted() const { return ChartChange(inverse_, forward_, target_samples_); }

ChartChange ChartChange::then(const ChartChange& next) const {
  if (next.dimension() != dimension()) throw Error("chart change dimensions differ");
  std::vector<Expr> fwd;
  for (const auto& f : next.forward_) fwd.push_back(substitute(f, forward_));
  std::vector<Expr> inv;
  for (const auto& g : inverse_) inv.push_back(substitute(g, next.inverse_));
  return ChartChange(std::move(fwd), std::move(inv), source_samples_);
}

ExprMatrix ChartChange::forward_jacobian() const { return jacobian(forward_, dimension()); }
ExprMatrix ChartChange::inverse_jacobian() const { return jacobian(inverse_, dimension()); }
Expr ChartChange::forward_det() const { return determinant(forward_jacobian()); }
Expr ChartChange::inverse_det() const { return determinant(inverse_jacobian()); }

}  // namespace densops
