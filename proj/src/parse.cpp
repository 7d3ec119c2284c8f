#include "densops/parse.hpp"

#include <cctype>
#include <optional>
#include <string>

#include "densops/error.hpp"

namespace densops {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, At, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
    const int line = line_;
    const int col = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", line, col};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) s += advance();
      return {Tok::Number, s, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        s += advance();
      return {Tok::Ident, s, line, col};
    }
    advance();
    switch (c) {
      case '+': return {Tok::Plus, "+", line, col};
      case '-': return {Tok::Minus, "-", line, col};
      case '*': return {Tok::Star, "*", line, col};
      case '/': return {Tok::Slash, "/", line, col};
      case '^': return {Tok::Caret, "^", line, col};
      case '@': return {Tok::At, "@", line, col};
      case '(': return {Tok::LParen, "(", line, col};
      case ')': return {Tok::RParen, ")", line, col};
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Commutative product of normal-ordered symbols.
DiffOperator symbol_product(const DiffOperator& a, const DiffOperator& b) {
  DiffOperator out(a.dimension());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      OpKey k{ka.alpha, ka.w + kb.w};
      for (std::size_t i = 0; i < k.alpha.size(); ++i) k.alpha[i] += kb.alpha[i];
      out.add_term(k, ca * cb);
    }
  }
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Chart& chart) : lexer_(text), chart_(chart), n_(chart.dimension()) {
    tok_ = lexer_.next();
  }

  DiffOperator parse_all() {
    DiffOperator result = composition();
    if (tok_.kind != Tok::End) fail("unexpected '" + tok_.text + "'");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.line, tok_.column); }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    tok_ = lexer_.next();
  }

  Expr require_function(const DiffOperator& op, const Token& at) const {
    if (op.is_zero()) return {};
    if (op.terms().size() == 1 && op.terms().begin()->first.order() == 0) return op.terms().begin()->second;
    throw ParseError("expected a function of the coordinates, found an operator", at.line, at.column);
  }

  DiffOperator composition() {
    DiffOperator lhs = sum();
    while (tok_.kind == Tok::At) {
      tok_ = lexer_.next();
      lhs = op_compose(lhs, sum());
    }
    return lhs;
  }

  DiffOperator sum() {
    DiffOperator lhs = product();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const bool minus = tok_.kind == Tok::Minus;
      tok_ = lexer_.next();
      DiffOperator rhs = product();
      lhs = minus ? lhs - rhs : lhs + rhs;
    }
    return lhs;
  }

  DiffOperator product() {
    DiffOperator lhs = unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const bool divide = tok_.kind == Tok::Slash;
      tok_ = lexer_.next();
      const Token at = tok_;
      DiffOperator rhs = unary();
      if (divide) {
        const Expr denom = require_function(rhs, at);
        if (denom.is_zero()) throw ParseError("division by zero", at.line, at.column);
        lhs = inverse(denom) * lhs;
      } else {
        lhs = symbol_product(lhs, rhs);
      }
    }
    return lhs;
  }

  DiffOperator unary() {
    if (tok_.kind == Tok::Minus) {
      tok_ = lexer_.next();
      return -unary();
    }
    if (tok_.kind == Tok::Plus) {
      tok_ = lexer_.next();
      return unary();
    }
    return power();
  }

  int integer_exponent() {
    bool paren = false;
    if (tok_.kind == Tok::LParen) {
      paren = true;
      tok_ = lexer_.next();
    }
    bool negative = false;
    if (tok_.kind == Tok::Minus) {
      negative = true;
      tok_ = lexer_.next();
    }
    if (tok_.kind != Tok::Number) fail("exponent must be an integer");
    if (tok_.text.size() > 6) fail("exponent too large");
    const int value = std::stoi(tok_.text);
    tok_ = lexer_.next();
    if (paren) expect(Tok::RParen, "')'");
    return negative ? -value : value;
  }

  DiffOperator power() {
    const Token base_tok = tok_;
    DiffOperator base = primary();
    if (tok_.kind != Tok::Caret) return base;
    tok_ = lexer_.next();
    const Token exp_tok = tok_;
    const int k = integer_exponent();
    const bool is_function = base.is_zero() || (base.terms().size() == 1 && base.terms().begin()->first.order() == 0);
    if (is_function) return DiffOperator::multiplication(n_, pow(require_function(base, base_tok), k));
    if (k < 0) throw ParseError("negative power of an operator", exp_tok.line, exp_tok.column);
    DiffOperator result = DiffOperator::multiplication(n_, Expr(1));
    for (int j = 0; j < k; ++j) result = symbol_product(result, base);
    return result;
  }

  DiffOperator primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::Number: {
        tok_ = lexer_.next();
        return DiffOperator::multiplication(n_, Expr(Rational::parse(t.text)));
      }
      case Tok::LParen: {
        tok_ = lexer_.next();
        DiffOperator inner = composition();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        tok_ = lexer_.next();
        return identifier(t);
      default:
        fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  DiffOperator identifier(const Token& t) {
    const std::string& name = t.text;
    if (name == "sin" || name == "cos" || name == "exp" || name == "log" || name == "adj") {
      expect(Tok::LParen, "'(' after function name");
      const Token at = tok_;
      DiffOperator arg = composition();
      expect(Tok::RParen, "')'");
      if (name == "adj") return op_adjoint(arg);
      const Expr e = require_function(arg, at);
      if (name == "sin") return DiffOperator::multiplication(n_, sin(e));
      if (name == "cos") return DiffOperator::multiplication(n_, cos(e));
      if (name == "exp") return DiffOperator::multiplication(n_, exp(e));
      return DiffOperator::multiplication(n_, log(e));
    }
    if (name == "w") return DiffOperator::weight(n_);
    if (name.size() > 1 && name[0] == 'd' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int i = std::stoi(name.substr(1)) - 1;
      if (i < 0 || i >= n_)
        throw IndexError(std::to_string(t.line) + ":" + std::to_string(t.column) + ": derivative " + name +
                         " outside chart of dimension " + std::to_string(n_));
      return DiffOperator::partial(n_, i);
    }
    if (auto i = chart_.index_of(name)) return DiffOperator::multiplication(n_, Expr::coord(*i));
    if (name.size() > 1 && name[0] == 'x' && name.find_first_not_of("0123456789", 1) == std::string::npos)
      throw IndexError(std::to_string(t.line) + ":" + std::to_string(t.column) + ": coordinate " + name +
                       " outside chart of dimension " + std::to_string(n_));
    throw ParseError("unknown identifier '" + name + "'", t.line, t.column);
  }

  Lexer lexer_;
  const Chart& chart_;
  int n_;
  Token tok_{};
};

}  // namespace

DiffOperator parse_operator(std::string_view text, const Chart& chart) {
  Parser p(text, chart);
  return p.parse_all();
}

Expr parse_expr(std::string_view text, const Chart& chart) {
  const DiffOperator op = parse_operator(text, chart);
  if (op.is_zero()) return {};
  if (op.terms().size() == 1 && op.terms().begin()->first.order() == 0) return op.terms().begin()->second;
  throw ParseError("expected an expression without d_i or w", 1, 1);
}

}  // namespace densops
