#pragma once

#include "hydroham/expr.hpp"
#include "hydroham/report.hpp"

namespace hydroham {

/// Randomized identity test: |e1 - e2| <= tol * max(1, |e1|, |e2|) + floor
/// at every sample point. Points where either side leaves its domain are
/// resampled; running out of the retry budget throws DomainTooHostile.
CheckReport expr_equal_numeric(const Expr& e1, const Expr& e2, const SamplePlan& plan);

}  // namespace hydroham
