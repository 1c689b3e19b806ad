#include "hydroham/expr.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hydroham {

namespace detail {

struct Node {
  NodeKind kind = NodeKind::constant;
  Rational value{0};  // constant value or pow exponent
  int variable = 0;
  double named = 0.0;
  std::string name;
  std::vector<Expr> children;
};

}  // namespace detail

using detail::Node;

namespace {

bool is_binary(NodeKind k) {
  return k == NodeKind::add || k == NodeKind::sub || k == NodeKind::mul || k == NodeKind::div;
}

bool is_function(NodeKind k) {
  return k == NodeKind::exp || k == NodeKind::log || k == NodeKind::sin || k == NodeKind::cos ||
         k == NodeKind::sqrt;
}

std::string rational_text(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

void render(const Expr& e, std::ostringstream& out) {
  switch (e.kind()) {
    case NodeKind::constant: {
      const auto& r = e.rational();
      if (r < 0 || r.denominator() != 1) {
        out << '(' << rational_text(r) << ')';
      } else {
        out << rational_text(r);
      }
      return;
    }
    case NodeKind::named_constant:
      out << e.name();
      return;
    case NodeKind::variable:
      out << 'u' << e.variable_index();
      return;
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div: {
      static constexpr const char* ops[] = {" + ", " - ", "*", "/"};
      const int op = static_cast<int>(e.kind()) - static_cast<int>(NodeKind::add);
      out << '(';
      render(e.child(0), out);
      out << ops[op];
      render(e.child(1), out);
      out << ')';
      return;
    }
    case NodeKind::pow:
      out << '(';
      render(e.child(0), out);
      out << ")^(" << rational_text(e.exponent()) << ')';
      return;
    case NodeKind::neg:
      out << "(-";
      render(e.child(0), out);
      out << ')';
      return;
    default:
      out << to_string(e.kind()) << '(';
      render(e.child(0), out);
      out << ')';
      return;
  }
}

}  // namespace

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::constant: return "constant";
    case NodeKind::named_constant: return "named_constant";
    case NodeKind::variable: return "variable";
    case NodeKind::add: return "add";
    case NodeKind::sub: return "sub";
    case NodeKind::mul: return "mul";
    case NodeKind::div: return "div";
    case NodeKind::pow: return "pow";
    case NodeKind::neg: return "neg";
    case NodeKind::exp: return "exp";
    case NodeKind::log: return "ln";
    case NodeKind::sin: return "sin";
    case NodeKind::cos: return "cos";
    case NodeKind::sqrt: return "sqrt";
  }
  return "?";
}

Expr::Expr() : Expr(constant(Rational(0))) {}

Expr Expr::constant(Rational value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::named_constant;
  n->named = std::numbers::pi;
  n->name = "pi";
  return Expr(std::move(n));
}

Expr Expr::euler() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::named_constant;
  n->named = std::numbers::e;
  n->name = "e";
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::variable;
  n->variable = index;
  return Expr(std::move(n));
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
  if (!is_binary(kind)) throw std::invalid_argument("not a binary node kind");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::unary(NodeKind kind, Expr arg) {
  if (kind != NodeKind::neg && !is_function(kind)) {
    throw std::invalid_argument("not a unary node kind");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, Rational exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::pow;
  n->value = exponent;
  n->children = {std::move(base)};
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
const Rational& Expr::rational() const { return node_->value; }
const Rational& Expr::exponent() const { return node_->value; }
int Expr::variable_index() const { return node_->variable; }
double Expr::named_value() const { return node_->named; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

bool Expr::is_zero() const { return is_constant() && rational() == Rational(0); }
bool Expr::is_one() const { return is_constant() && rational() == Rational(1); }

int Expr::max_variable_index() const {
  if (kind() == NodeKind::variable) return variable_index();
  int m = 0;
  for (const auto& c : children()) m = std::max(m, c.max_variable_index());
  return m;
}

bool Expr::depends_on(int index) const {
  if (kind() == NodeKind::variable) return variable_index() == index;
  for (const auto& c : children()) {
    if (c.depends_on(index)) return true;
  }
  return false;
}

std::size_t Expr::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.node_count();
  return n;
}

std::string Expr::to_string() const {
  std::ostringstream out;
  render(*this, out);
  return out.str();
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::constant: return a.rational() == b.rational();
    case NodeKind::named_constant: return a.name() == b.name();
    case NodeKind::variable: return a.variable_index() == b.variable_index();
    case NodeKind::pow:
      if (a.exponent() != b.exponent()) return false;
      break;
    default: break;
  }
  const auto& ca = a.children();
  const auto& cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!(ca[i] == cb[i])) return false;
  }
  return true;
}

// Folding builders ---------------------------------------------------------

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.rational() + b.rational());
  return Expr::binary(NodeKind::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.rational() - b.rational());
  return Expr::binary(NodeKind::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::constant(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.rational() * b.rational());
  if (a.is_constant() && a.rational() == Rational(-1)) return -b;
  if (b.is_constant() && b.rational() == Rational(-1)) return -a;
  return Expr::binary(NodeKind::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return Expr::constant(0);
  if (a.is_constant() && b.is_constant() && b.rational() != Rational(0)) {
    return Expr::constant(a.rational() / b.rational());
  }
  return Expr::binary(NodeKind::div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.rational());
  if (a.kind() == NodeKind::neg) return a.child(0);
  return Expr::unary(NodeKind::neg, a);
}

Expr pow(const Expr& base, Rational exponent) {
  if (exponent.numerator() == 0) return Expr::constant(1);
  if (exponent == Rational(1)) return base;
  if (base.is_constant() && exponent.denominator() == 1 && base.rational() != Rational(0)) {
    const long long p = exponent.numerator();
    Rational r(1);
    const Rational b = p > 0 ? base.rational() : Rational(1) / base.rational();
    for (long long i = 0; i < (p > 0 ? p : -p); ++i) r *= b;
    return Expr::constant(r);
  }
  return Expr::power(base, exponent);
}

Expr exp(const Expr& a) {
  if (a.is_zero()) return Expr::constant(1);
  return Expr::unary(NodeKind::exp, a);
}
Expr log(const Expr& a) {
  if (a.is_one()) return Expr::constant(0);
  return Expr::unary(NodeKind::log, a);
}
Expr sin(const Expr& a) {
  if (a.is_zero()) return Expr::constant(0);
  return Expr::unary(NodeKind::sin, a);
}
Expr cos(const Expr& a) {
  if (a.is_zero()) return Expr::constant(1);
  return Expr::unary(NodeKind::cos, a);
}
Expr sqrt(const Expr& a) { return Expr::unary(NodeKind::sqrt, a); }

Expr derivative(const Expr& e, int index) {
  if (!e.depends_on(index)) return Expr::constant(0);
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::named_constant:
      return Expr::constant(0);
    case NodeKind::variable:
      return Expr::constant(e.variable_index() == index ? 1 : 0);
    case NodeKind::add:
      return derivative(e.child(0), index) + derivative(e.child(1), index);
    case NodeKind::sub:
      return derivative(e.child(0), index) - derivative(e.child(1), index);
    case NodeKind::mul:
      return derivative(e.child(0), index) * e.child(1) + e.child(0) * derivative(e.child(1), index);
    case NodeKind::div: {
      const Expr& f = e.child(0);
      const Expr& g = e.child(1);
      return (derivative(f, index) * g - f * derivative(g, index)) / pow(g, Rational(2));
    }
    case NodeKind::pow: {
      const Rational p = e.exponent();
      return Expr::constant(p) * pow(e.child(0), p - 1) * derivative(e.child(0), index);
    }
    case NodeKind::neg:
      return -derivative(e.child(0), index);
    case NodeKind::exp:
      return e * derivative(e.child(0), index);
    case NodeKind::log:
      return derivative(e.child(0), index) / e.child(0);
    case NodeKind::sin:
      return cos(e.child(0)) * derivative(e.child(0), index);
    case NodeKind::cos:
      return -(sin(e.child(0)) * derivative(e.child(0), index));
    case NodeKind::sqrt:
      return derivative(e.child(0), index) / (Expr::constant(2) * e);
  }
  throw std::logic_error("derivative: unhandled node");
}

Expr substitute(const Expr& e, const std::map<int, Expr>& replacements) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::named_constant:
      return e;
    case NodeKind::variable: {
      auto it = replacements.find(e.variable_index());
      return it == replacements.end() ? e : it->second;
    }
    case NodeKind::pow:
      return Expr::power(substitute(e.child(0), replacements), e.exponent());
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div:
      return Expr::binary(e.kind(), substitute(e.child(0), replacements),
                          substitute(e.child(1), replacements));
    default:
      return Expr::unary(e.kind(), substitute(e.child(0), replacements));
  }
}

// VariableTable -------------------------------------------------------------

VariableTable VariableTable::standard(int n) {
  VariableTable t;
  for (int i = 1; i <= n; ++i) {
    t.add("u" + std::to_string(i), i);
    t.add("r" + std::to_string(i), i);
  }
  t.dimension_ = n;
  return t;
}

void VariableTable::add(std::string name, int index) {
  if (index < 1) throw std::invalid_argument("variable slot must be >= 1");
  names_.emplace_back(std::move(name), index);
  dimension_ = std::max(dimension_, index);
}

const int* VariableTable::find(std::string_view name) const {
  for (const auto& [n, i] : names_) {
    if (n == name) return &i;
  }
  return nullptr;
}

}  // namespace hydroham
