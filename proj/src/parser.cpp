// Recursive-descent parser for coefficient expressions.
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := ('-' | '+') unary | power
//   power    := primary ('^' unary)?          exponent must fold to a rational
//   primary  := number | name | name '(' expr ')' | '(' expr ')'

#include <cctype>
#include <limits>
#include <optional>

#include "hydroham/errors.hpp"
#include "hydroham/expr.hpp"

namespace hydroham {

namespace {

struct Token {
  enum class Kind { number, name, op, end } kind = Kind::end;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    Token t;
    t.pos = i_;
    if (i_ >= src_.size()) return t;
    const char c = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      t.kind = Token::Kind::number;
      std::size_t j = i_;
      while (j < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.')) ++j;
      if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
        if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
          j = k;
          while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        }
      }
      t.text = std::string(src_.substr(i_, j - i_));
      i_ = j;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::name;
      std::size_t j = i_;
      while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
      t.text = std::string(src_.substr(i_, j - i_));
      i_ = j;
      return t;
    }
    if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::op;
      t.text = std::string(1, c);
      ++i_;
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i_);
  }

 private:
  std::string_view src_;
  std::size_t i_ = 0;
};

// Exact value of a decimal literal such as "0.25" or "1e-3".
Rational parse_number(const Token& t) {
  const std::string& s = t.text;
  long long mantissa = 0;
  long long scale = 0;  // power of ten to divide by
  bool seen_dot = false;
  bool any_digit = false;
  std::size_t i = 0;
  constexpr long long limit = std::numeric_limits<long long>::max() / 10 - 10;
  for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
    if (s[i] == '.') {
      if (seen_dot) throw ParseError("malformed number '" + s + "'", t.pos);
      seen_dot = true;
      continue;
    }
    any_digit = true;
    if (mantissa > limit) throw ParseError("numeric literal too long '" + s + "'", t.pos);
    mantissa = mantissa * 10 + (s[i] - '0');
    if (seen_dot) ++scale;
  }
  if (!any_digit) throw ParseError("malformed number '" + s + "'", t.pos);
  if (i < s.size()) {
    const int e = std::stoi(s.substr(i + 1));
    scale -= e;
  }
  if (scale > 18 || scale < -18) throw ParseError("numeric literal out of range '" + s + "'", t.pos);
  long long p10 = 1;
  for (long long k = 0; k < (scale > 0 ? scale : -scale); ++k) p10 *= 10;
  if (scale >= 0) return Rational(mantissa, p10);
  if (mantissa != 0 && mantissa > std::numeric_limits<long long>::max() / p10) {
    throw ParseError("numeric literal out of range '" + s + "'", t.pos);
  }
  return Rational(mantissa * p10);
}

// Exact rational value of a closed constant subtree, if it has one.
std::optional<Rational> fold_rational(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::constant:
      return e.rational();
    case NodeKind::neg: {
      auto v = fold_rational(e.child(0));
      if (!v) return std::nullopt;
      return -*v;
    }
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div: {
      auto a = fold_rational(e.child(0));
      auto b = fold_rational(e.child(1));
      if (!a || !b) return std::nullopt;
      switch (e.kind()) {
        case NodeKind::add: return *a + *b;
        case NodeKind::sub: return *a - *b;
        case NodeKind::mul: return *a * *b;
        default:
          if (b->numerator() == 0) return std::nullopt;
          return *a / *b;
      }
    }
    default:
      return std::nullopt;
  }
}

bool looks_like_variable(const std::string& name) {
  if (name.size() < 2 || (name[0] != 'u' && name[0] != 'r')) return false;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  }
  return true;
}

class Parser {
 public:
  Parser(std::string_view text, const VariableTable& table) : lex_(text), table_(table) {
    advance();
  }

  Expr parse() {
    Expr e = expr();
    if (cur_.kind != Token::Kind::end) {
      throw ParseError("unexpected token '" + cur_.text + "'", cur_.pos);
    }
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  bool at_op(char c) const {
    return cur_.kind == Token::Kind::op && cur_.text[0] == c;
  }

  void expect(char c) {
    if (!at_op(c)) {
      const std::string got = cur_.kind == Token::Kind::end ? "end of input" : "'" + cur_.text + "'";
      throw ParseError(std::string("expected '") + c + "', got " + got, cur_.pos);
    }
    advance();
  }

  Expr expr() {
    Expr lhs = term();
    while (at_op('+') || at_op('-')) {
      const NodeKind k = at_op('+') ? NodeKind::add : NodeKind::sub;
      advance();
      lhs = Expr::binary(k, lhs, term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (at_op('*') || at_op('/')) {
      const NodeKind k = at_op('*') ? NodeKind::mul : NodeKind::div;
      advance();
      lhs = Expr::binary(k, lhs, unary());
    }
    return lhs;
  }

  Expr unary() {
    if (at_op('-')) {
      advance();
      return Expr::unary(NodeKind::neg, unary());
    }
    if (at_op('+')) {
      advance();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (at_op('^')) {
      const std::size_t pos = cur_.pos;
      advance();
      Expr ex = unary();
      auto value = fold_rational(ex);
      if (!value) throw ParseError("exponent must be a constant rational", pos);
      return Expr::power(base, *value);
    }
    return base;
  }

  Expr primary() {
    if (cur_.kind == Token::Kind::number) {
      Rational v = parse_number(cur_);
      advance();
      return Expr::constant(v);
    }
    if (at_op('(')) {
      advance();
      Expr e = expr();
      expect(')');
      return e;
    }
    if (cur_.kind == Token::Kind::name) {
      const Token name = cur_;
      advance();
      if (at_op('(')) {
        const NodeKind fn = function_kind(name);
        advance();
        Expr arg = expr();
        expect(')');
        return Expr::unary(fn, arg);
      }
      if (const int* slot = table_.find(name.text)) return Expr::variable(*slot);
      if (name.text == "pi") return Expr::pi();
      if (name.text == "e") return Expr::euler();
      if (looks_like_variable(name.text)) {
        throw ParseError("variable index out of range '" + name.text + "' (dimension " +
                             std::to_string(table_.dimension()) + ")",
                         name.pos);
      }
      throw ParseError("unknown identifier '" + name.text + "'", name.pos);
    }
    if (cur_.kind == Token::Kind::end) throw ParseError("unexpected end of input", cur_.pos);
    throw ParseError("unexpected token '" + cur_.text + "'", cur_.pos);
  }

  static NodeKind function_kind(const Token& t) {
    if (t.text == "exp") return NodeKind::exp;
    if (t.text == "ln" || t.text == "log") return NodeKind::log;
    if (t.text == "sin") return NodeKind::sin;
    if (t.text == "cos") return NodeKind::cos;
    if (t.text == "sqrt") return NodeKind::sqrt;
    throw ParseError("unknown function '" + t.text + "'", t.pos);
  }

  Lexer lex_;
  const VariableTable& table_;
  Token cur_;
};

}  // namespace

Expr parse_expr(std::string_view text, const VariableTable& table) {
  return Parser(text, table).parse();
}

Expr parse_expr(std::string_view text, int n) {
  if (n < 1) throw InvalidInput("dimension must be >= 1");
  return parse_expr(text, VariableTable::standard(n));
}

}  // namespace hydroham
