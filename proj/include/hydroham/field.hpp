#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "hydroham/expr.hpp"
#include "hydroham/jet.hpp"
#include "hydroham/sampling.hpp"

namespace hydroham {

/// A scalar coefficient field: either an expression tree or a composite
/// callable (for results such as transformed systems that are built from
/// other fields rather than from text).
class Field {
 public:
  using JetFn = std::function<Jet(const Point&, int order)>;

  Field() : Field(Expr()) {}
  Field(Expr e);  // NOLINT(google-explicit-constructor): expressions are fields

  static Field callable(std::string label, JetFn fn);

  /// Jet of order 0..kMaxJetOrder at p.
  Jet jet(const Point& p, int order) const;
  double value(const Point& p) const;

  const std::optional<Expr>& expr() const { return expr_; }
  std::string describe() const;

 private:
  std::optional<Expr> expr_;
  std::shared_ptr<const JetFn> fn_;
  std::string label_;
};

}  // namespace hydroham
