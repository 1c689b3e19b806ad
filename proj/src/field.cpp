#include "hydroham/field.hpp"

#include "hydroham/errors.hpp"
#include "hydroham/eval.hpp"

namespace hydroham {

Field::Field(Expr e) : expr_(std::move(e)) {}

Field Field::callable(std::string label, JetFn fn) {
  Field f;
  f.expr_.reset();
  f.fn_ = std::make_shared<const JetFn>(std::move(fn));
  f.label_ = std::move(label);
  return f;
}

Jet Field::jet(const Point& p, int order) const {
  if (expr_) {
    if (order == 0) return Jet::constant(p.dimension(), 0, eval_scalar(*expr_, p));
    return eval_jet(*expr_, p, order);
  }
  return (*fn_)(p, order);
}

double Field::value(const Point& p) const {
  if (expr_) return eval_scalar(*expr_, p);
  return (*fn_)(p, 0).value();
}

std::string Field::describe() const { return expr_ ? expr_->to_string() : "<" + label_ + ">"; }

}  // namespace hydroham
