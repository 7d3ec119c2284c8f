#include "densops/json_io.hpp"

#include "densops/error.hpp"
#include "densops/parse.hpp"

namespace densops {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string("missing field '") + key + "'");
  return j.at(key);
}

void require_dimension(int got, const Chart& chart, const char* what) {
  if (got != chart.dimension())
    throw Error(std::string(what) + " has dimension " + std::to_string(got) + ", chart has " +
                std::to_string(chart.dimension()));
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw Error("expected a rational as an integer or a \"p/q\" string");
}

Expr expr_from_json(const json& j, const Chart& chart) {
  if (j.is_number_integer()) return Expr(j.get<long>());
  if (j.is_string()) return parse_expr(j.get<std::string>(), chart);
  throw Error("expected an expression string");
}

std::vector<Expr> exprs_from_json(const json& j, const Chart& chart) {
  if (!j.is_array()) throw Error("expected an array of expressions");
  std::vector<Expr> out;
  for (const auto& e : j) out.push_back(expr_from_json(e, chart));
  return out;
}

ExprMatrix matrix_from_json(const json& j, const Chart& chart) {
  if (!j.is_array()) throw Error("expected a matrix of expressions");
  ExprMatrix out;
  for (const auto& row : j) {
    out.push_back(exprs_from_json(row, chart));
    if (out.back().size() != j.size()) throw Error("matrix must be square");
  }
  return out;
}

json to_json(const Expr& e) { return to_string(e); }

json to_json(const ExprMatrix& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& e : row) r.push_back(to_json(e));
    out.push_back(r);
  }
  return out;
}

Density density_from_json(const json& j, const Chart& chart) {
  Density d;
  for (const auto& t : field(j, "terms"))
    d.add(rational_from_json(field(t, "weight")), expr_from_json(field(t, "coeff"), chart));
  return d;
}

json to_json(const Density& d) {
  json terms = json::array();
  for (const auto& [w, c] : d.terms()) terms.push_back({{"weight", w.to_string()}, {"coeff", to_json(c)}});
  return {{"terms", terms}};
}

DiffOperator operator_from_json(const json& j, const Chart& chart) {
  if (j.is_string()) return parse_operator(j.get<std::string>(), chart);
  const int n = field(j, "dim").get<int>();
  require_dimension(n, chart, "operator");
  DiffOperator op(n);
  for (const auto& t : field(j, "terms")) {
    OpKey key{field(t, "alpha").get<std::vector<int>>(), t.value("w", 0)};
    if (static_cast<int>(key.alpha.size()) != n) throw IndexError("multi-index length differs from dimension");
    for (int a : key.alpha)
      if (a < 0) throw Error("multi-index entries must be non-negative");
    if (key.w < 0) throw Error("power of w must be non-negative");
    op.add_term(key, expr_from_json(field(t, "coeff"), chart));
  }
  return op;
}

json to_json(const DiffOperator& op) {
  json terms = json::array();
  for (const auto& [key, c] : op.terms()) terms.push_back({{"alpha", key.alpha}, {"w", key.w}, {"coeff", to_json(c)}});
  return {{"dim", op.dimension()}, {"terms", terms}, {"text", to_string(op)}};
}

SymbolTriple symbol_from_json(const json& j, const Chart& chart) {
  const ExprMatrix s = matrix_from_json(field(j, "S"), chart);
  const int n = static_cast<int>(s.size());
  require_dimension(n, chart, "symbol");
  SymbolTriple st(n);
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) {
      if (!expr_equal(s[u(i)][u(k)], s[u(k)][u(i)])) throw Error("S must be symmetric");
      st.S.set(i, k, s[u(i)][u(k)]);
    }
  st.B = exprs_from_json(field(j, "B"), chart);
  if (static_cast<int>(st.B.size()) != n) throw Error("B has the wrong length");
  st.C = expr_from_json(field(j, "C"), chart);
  return st;
}

json to_json(const SymbolTriple& st) {
  json b = json::array();
  for (const auto& e : st.B) b.push_back(to_json(e));
  return {{"S", to_json(st.S.to_matrix())}, {"B", b}, {"C", to_json(st.C)}};
}

Metric metric_from_json(const json& j, const Chart& chart) {
  ExprMatrix g = matrix_from_json(field(j, "g"), chart);
  require_dimension(static_cast<int>(g.size()), chart, "metric");
  if (j.contains("g_inv")) return Metric(std::move(g), matrix_from_json(j.at("g_inv"), chart));
  return Metric(std::move(g));
}

json to_json(const Metric& g) { return {{"g", to_json(g.g())}, {"g_inv", to_json(g.inverse())}}; }

Christoffel christoffel_from_json(const json& j, const Chart& chart) {
  const int n = field(j, "dim").get<int>();
  require_dimension(n, chart, "christoffel");
  const json& s = field(j, "symbols");
  if (!s.is_array() || static_cast<int>(s.size()) != n) throw Error("symbols must have one block per upper index");
  Christoffel out(n);
  for (int i = 0; i < n; ++i) {
    const json& block = s[u(i)];
    if (!block.is_array() || static_cast<int>(block.size()) != n) throw Error("each block needs n rows");
    for (int k = 0; k < n; ++k) {
      const json& row = block[u(k)];
      if (!row.is_array() || static_cast<int>(row.size()) != k + 1)
        throw Error("row k of a block stores the entries m = 0..k");
      for (int m = 0; m <= k; ++m) out.set(i, k, m, expr_from_json(row[u(m)], chart));
    }
  }
  return out;
}

json to_json(const Christoffel& g) {
  const int n = g.dimension();
  json s = json::array();
  for (int i = 0; i < n; ++i) {
    json block = json::array();
    for (int k = 0; k < n; ++k) {
      json row = json::array();
      for (int m = 0; m <= k; ++m) row.push_back(to_json(g(i, k, m)));
      block.push_back(row);
    }
    s.push_back(block);
  }
  return {{"dim", n}, {"symbols", s}};
}

json to_json(const ExtendedChristoffel& g) {
  const int n = g.dimension();
  json s = json::array();
  for (int a = 0; a <= n; ++a) {
    json block = json::array();
    for (int b = 0; b <= n; ++b) {
      json row = json::array();
      for (int c = 0; c <= b; ++c) row.push_back(to_json(g(a, b, c)));
      block.push_back(row);
    }
    s.push_back(block);
  }
  return {{"dim", n}, {"vertical_index", n}, {"symbols", s}};
}

ChartChange chart_change_from_json(const json& j, const Chart& chart) {
  std::vector<Expr> forward = exprs_from_json(field(j, "forward"), chart);
  std::vector<Expr> inverse = exprs_from_json(field(j, "inverse"), chart);
  require_dimension(static_cast<int>(forward.size()), chart, "forward map");
  require_dimension(static_cast<int>(inverse.size()), chart, "inverse map");
  return ChartChange(std::move(forward), std::move(inverse));
}

json to_json(const ChartChange& ch) {
  json f = json::array();
  json i = json::array();
  for (const auto& e : ch.forward()) f.push_back(to_json(e));
  for (const auto& e : ch.inverse()) i.push_back(to_json(e));
  return {{"forward", f}, {"inverse", i}};
}

Connection connection_from_json(const json& j, const Chart& chart) {
  Connection g{exprs_from_json(j.is_array() ? j : field(j, "gamma"), chart)};
  require_dimension(g.dimension(), chart, "connection");
  return g;
}

json to_json(const Connection& g) {
  json out = json::array();
  for (const auto& e : g.components) out.push_back(to_json(e));
  return {{"gamma", out}};
}

VectorField vector_field_from_json(const json& j, const Chart& chart) {
  VectorField x{exprs_from_json(j.is_array() ? j : field(j, "X"), chart)};
  require_dimension(x.dimension(), chart, "vector field");
  return x;
}

json to_json(const VectorField& x) {
  json out = json::array();
  for (const auto& e : x.components) out.push_back(to_json(e));
  return {{"X", out}};
}

LambdaOperator pencil_input_from_json(const json& j, const Chart& chart) {
  const int n = chart.dimension();
  const ExprMatrix a2 = matrix_from_json(field(j, "A2"), chart);
  require_dimension(static_cast<int>(a2.size()), chart, "A2");
  const std::vector<Expr> a1 = exprs_from_json(field(j, "A1"), chart);
  require_dimension(static_cast<int>(a1.size()), chart, "A1");
  DiffOperator op(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      OpKey key{std::vector<int>(u(n), 0), 0};
      ++key.alpha[u(i)];
      ++key.alpha[u(k)];
      op.add_term(key, a2[u(i)][u(k)]);
    }
    op.add_term(key_of(n, {i}), a1[u(i)]);
  }
  op.add_term(key_of(n, {}), expr_from_json(field(j, "A0"), chart));
  return LambdaOperator(std::move(op), rational_from_json(field(j, "lambda0")));
}

json to_json(const SuiteReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"trial", f.trial}, {"inputs", f.inputs}, {"lhs", f.lhs}, {"rhs", f.rhs}});
  return {{"suite", r.suite},       {"seed", r.seed},         {"trials", r.trials},
          {"max_residual", r.max_residual}, {"passed", r.passed()}, {"failures", failures}};
}

}  // namespace densops
