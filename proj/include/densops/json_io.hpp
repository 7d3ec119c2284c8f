#pragma once
// JSON documents. Expressions are strings in the expression syntax; rationals are strings
// "p/q" or integers.
//
//   density       {"terms": [{"weight": "1/2", "coeff": "sin(x1)"}]}
//   operator      {"dim": n, "terms": [{"alpha": [1, 0], "w": 1, "coeff": "..."}]}
//   symbol        {"S": [[...]], "B": [...], "C": "..."}
//   metric        {"g": [[...]], "g_inv": [[...]]}            g_inv optional
//   christoffel   {"dim": n, "symbols": [[[...]]]}              symbols[i][k][m] for m <= k
//   chart change  {"forward": [...], "inverse": [...]}
//   connection    {"gamma": [...]}
//   vector field  {"X": [...]}
//   pencil input  {"A2": [[...]], "A1": [...], "A0": "...", "lambda0": "2"}
//   report        {"suite", "seed", "trials", "max_residual", "failures": [{"trial", "inputs", "lhs", "rhs"}]}

#include <json.hpp>

#include "densops/chart.hpp"
#include "densops/density.hpp"
#include "densops/geometry.hpp"
#include "densops/operator.hpp"
#include "densops/pencil.hpp"
#include "densops/verify.hpp"

namespace densops {

using json = nlohmann::json;

Rational rational_from_json(const json& j);
Expr expr_from_json(const json& j, const Chart& chart);
std::vector<Expr> exprs_from_json(const json& j, const Chart& chart);
ExprMatrix matrix_from_json(const json& j, const Chart& chart);

json to_json(const Expr& e);
json to_json(const ExprMatrix& m);

Density density_from_json(const json& j, const Chart& chart);
json to_json(const Density& d);

/// Accepts either an operator document or a DSL string.
DiffOperator operator_from_json(const json& j, const Chart& chart);
json to_json(const DiffOperator& op);

SymbolTriple symbol_from_json(const json& j, const Chart& chart);
json to_json(const SymbolTriple& st);

Metric metric_from_json(const json& j, const Chart& chart);
json to_json(const Metric& g);

Christoffel christoffel_from_json(const json& j, const Chart& chart);
json to_json(const Christoffel& g);
/// Extended symbols with index n standing for the vertical coordinate.
json to_json(const ExtendedChristoffel& g);

ChartChange chart_change_from_json(const json& j, const Chart& chart);
json to_json(const ChartChange& ch);

Connection connection_from_json(const json& j, const Chart& chart);
json to_json(const Connection& g);

VectorField vector_field_from_json(const json& j, const Chart& chart);
json to_json(const VectorField& x);

LambdaOperator pencil_input_from_json(const json& j, const Chart& chart);

json to_json(const SuiteReport& r);

}  // namespace densops
