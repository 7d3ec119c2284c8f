#pragma once

// Text syntax shared by the CLI and the JSON documents.
//
//   expressions   x1..xn (or the chart's names), integers, p/q, + - * / ^,
//                 sin cos exp log, parentheses; exponents are integers
//   operators     d1..dn for the partial derivatives, w for the weight operator t d/dt,
//                 adj(...) for the adjoint, and '@' for composition
//
// '*' multiplies symbols: the result is written with every coefficient on the left, so
// "d1*x1" and "x1*d1" are the same operator. '@' composes with the Leibniz rule:
// "d1 @ x1" is x1*d1 + 1. '@' binds loosest. A term 2*w*B(x)*d1 contributes B to the
// upper connection of the principal symbol (see extract_symbol).

#include <string_view>

#include "densops/chart.hpp"
#include "densops/expr.hpp"
#include "densops/operator.hpp"

namespace densops {

/// Throws ParseError (with line/column) or IndexError for coordinates outside the chart.
DiffOperator parse_operator(std::string_view text, const Chart& chart);

/// As parse_operator, but rejects d_i and w.
Expr parse_expr(std::string_view text, const Chart& chart);

}  // namespace densops
