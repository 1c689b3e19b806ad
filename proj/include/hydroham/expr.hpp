#pragma once

// Immutable expression trees over field variables u1..un.
//
// Variables are 1-based in the public API (u1 is index 1) to match the way
// coefficient functions are written; points and jets are 0-based vectors.

#include <boost/rational.hpp>

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hydroham {

using Rational = boost::rational<long long>;

enum class NodeKind {
  constant,        // exact rational
  named_constant,  // pi, e
  variable,
  add,
  sub,
  mul,
  div,
  pow,  // base ^ constant rational exponent
  neg,
  exp,
  log,
  sin,
  cos,
  sqrt,
};

const char* to_string(NodeKind kind);

class Expr;

namespace detail {
struct Node;
}

class Expr {
 public:
  /// The constant 0.
  Expr();

  static Expr constant(Rational value);
  static Expr constant(long long value) { return constant(Rational(value)); }
  static Expr pi();
  static Expr euler();
  static Expr variable(int index);

  /// Raw node constructors; no folding. Used by the parser so that parse
  /// trees mirror the input text.
  static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
  static Expr unary(NodeKind kind, Expr arg);
  static Expr power(Expr base, Rational exponent);

  NodeKind kind() const;
  const Rational& rational() const;    // constant nodes
  const Rational& exponent() const;    // pow nodes
  int variable_index() const;          // variable nodes, 1-based
  double named_value() const;          // named_constant nodes
  const std::string& name() const;     // named_constant nodes
  const std::vector<Expr>& children() const;
  const Expr& child(std::size_t i) const { return children().at(i); }

  bool is_constant() const { return kind() == NodeKind::constant; }
  bool is_zero() const;
  bool is_one() const;

  /// Largest variable index referenced; 0 for closed expressions.
  int max_variable_index() const;
  bool depends_on(int index) const;
  std::size_t node_count() const;

  /// Infix rendering that re-parses to a structurally equal tree.
  std::string to_string() const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const detail::Node> node_;
};

// Folding builders: trivial identities (0+x, 1*x, 0*x, constant arithmetic)
// are collapsed so that symbolic derivatives stay small.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, Rational exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);

/// Symbolic partial derivative with respect to variable `index` (1-based).
Expr derivative(const Expr& e, int index);

/// Replace variables by expressions. Unlisted variables are kept.
Expr substitute(const Expr& e, const std::map<int, Expr>& replacements);

/// Maps identifiers to 1-based variable slots.
class VariableTable {
 public:
  /// u1..un and r1..rn.
  static VariableTable standard(int n);

  void add(std::string name, int index);
  const int* find(std::string_view name) const;
  int dimension() const { return dimension_; }

 private:
  std::vector<std::pair<std::string, int>> names_;
  int dimension_ = 0;
};

/// Parse `text` over variables u1..un (aliases r1..rn).
Expr parse_expr(std::string_view text, int n);

/// Parse with an explicit identifier table.
Expr parse_expr(std::string_view text, const VariableTable& table);

}  // namespace hydroham
