#include "hydroham/eval.hpp"

#include <cmath>
#include <string>

#include "hydroham/errors.hpp"

namespace hydroham {

namespace {

void require_finite(double v, const Expr& e) {
  if (!std::isfinite(v)) throw DomainError("non-finite value", e.to_string());
}

void require_variable(const Expr& e, const Point& p) {
  if (e.variable_index() > p.dimension()) {
    throw InvalidInput("variable u" + std::to_string(e.variable_index()) + " outside point of dimension " +
                       std::to_string(p.dimension()));
  }
}

// Shared domain rules for the scalar and jet evaluators.
void check_pow_domain(double base, const Rational& exponent, const Expr& e) {
  if (base == 0.0 && exponent < 0) throw DomainError("0 raised to a negative power", e.to_string());
  if (base < 0.0 && exponent.denominator() != 1) {
    throw DomainError("non-integer power of a negative value", e.to_string());
  }
}

double scalar(const Expr& e, const Point& p) {
  switch (e.kind()) {
    case NodeKind::constant:
      return boost::rational_cast<double>(e.rational());
    case NodeKind::named_constant:
      return e.named_value();
    case NodeKind::variable:
      require_variable(e, p);
      return p[e.variable_index() - 1];
    case NodeKind::add: return scalar(e.child(0), p) + scalar(e.child(1), p);
    case NodeKind::sub: return scalar(e.child(0), p) - scalar(e.child(1), p);
    case NodeKind::mul: return scalar(e.child(0), p) * scalar(e.child(1), p);
    case NodeKind::div: {
      const double den = scalar(e.child(1), p);
      if (den == 0.0) throw DomainError("division by zero", e.to_string());
      return scalar(e.child(0), p) / den;
    }
    case NodeKind::pow: {
      const double b = scalar(e.child(0), p);
      check_pow_domain(b, e.exponent(), e);
      const double v = std::pow(b, boost::rational_cast<double>(e.exponent()));
      require_finite(v, e);
      return v;
    }
    case NodeKind::neg: return -scalar(e.child(0), p);
    case NodeKind::exp: {
      const double v = std::exp(scalar(e.child(0), p));
      require_finite(v, e);
      return v;
    }
    case NodeKind::log: {
      const double a = scalar(e.child(0), p);
      if (a <= 0.0) throw DomainError("ln of a non-positive value", e.to_string());
      return std::log(a);
    }
    case NodeKind::sin: return std::sin(scalar(e.child(0), p));
    case NodeKind::cos: return std::cos(scalar(e.child(0), p));
    case NodeKind::sqrt: {
      const double a = scalar(e.child(0), p);
      if (a < 0.0) throw DomainError("sqrt of a negative value", e.to_string());
      return std::sqrt(a);
    }
  }
  throw std::logic_error("eval_scalar: unhandled node");
}

Jet jet(const Expr& e, const Point& p, int order) {
  const int n = p.dimension();
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::named_constant:
      return Jet::constant(n, order, scalar(e, p));
    case NodeKind::variable:
      require_variable(e, p);
      return Jet::variable(n, order, e.variable_index() - 1, p[e.variable_index() - 1]);
    case NodeKind::add: return jet(e.child(0), p, order) + jet(e.child(1), p, order);
    case NodeKind::sub: return jet(e.child(0), p, order) - jet(e.child(1), p, order);
    case NodeKind::mul: return jet(e.child(0), p, order) * jet(e.child(1), p, order);
    case NodeKind::div: {
      Jet den = jet(e.child(1), p, order);
      if (den.value() == 0.0) throw DomainError("division by zero", e.to_string());
      return jet(e.child(0), p, order) / den;
    }
    case NodeKind::pow: {
      Jet b = jet(e.child(0), p, order);
      const Rational& ex = e.exponent();
      check_pow_domain(b.value(), ex, e);
      if (ex.denominator() == 1) return pow_int(b, ex.numerator());
      if (b.value() == 0.0) throw DomainError("non-integer power at 0 is not differentiable", e.to_string());
      return pow(b, boost::rational_cast<double>(ex));
    }
    case NodeKind::neg: return -jet(e.child(0), p, order);
    case NodeKind::exp: {
      Jet r = exp(jet(e.child(0), p, order));
      require_finite(r.value(), e);
      return r;
    }
    case NodeKind::log: {
      Jet a = jet(e.child(0), p, order);
      if (a.value() <= 0.0) throw DomainError("ln of a non-positive value", e.to_string());
      return log(a);
    }
    case NodeKind::sin: return sin(jet(e.child(0), p, order));
    case NodeKind::cos: return cos(jet(e.child(0), p, order));
    case NodeKind::sqrt: {
      Jet a = jet(e.child(0), p, order);
      if (a.value() <= 0.0) {
        throw DomainError(a.value() < 0.0 ? "sqrt of a negative value" : "sqrt is not differentiable at 0",
                          e.to_string());
      }
      return sqrt(a);
    }
  }
  throw std::logic_error("eval_jet: unhandled node");
}

}  // namespace

double eval_scalar(const Expr& e, const Point& p) { return scalar(e, p); }

Jet eval_jet(const Expr& e, const Point& p, int order) {
  if (order < 1 || order > kMaxJetOrder) {
    throw InvalidInput("jet order must be in 1.." + std::to_string(kMaxJetOrder));
  }
  return jet(e, p, order);
}

}  // namespace hydroham
