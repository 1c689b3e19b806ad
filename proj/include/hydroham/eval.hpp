#pragma once

#include "hydroham/expr.hpp"
#include "hydroham/jet.hpp"
#include "hydroham/sampling.hpp"

namespace hydroham {

/// Value of `e` at `p`. Throws DomainError naming the offending subtree.
double eval_scalar(const Expr& e, const Point& p);

/// All partial derivatives of `e` at `p` up to total degree `order`
/// (1..kMaxJetOrder), by jet propagation through the tree.
Jet eval_jet(const Expr& e, const Point& p, int order);

}  // namespace hydroham
