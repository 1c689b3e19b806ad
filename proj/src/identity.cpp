#include "hydroham/identity.hpp"

#include <cmath>

#include "hydroham/errors.hpp"
#include "hydroham/eval.hpp"

namespace hydroham {

CheckReport expr_equal_numeric(const Expr& e1, const Expr& e2, const SamplePlan& plan) {
  const int n = plan.dimension();
  if (e1.max_variable_index() > n || e2.max_variable_index() > n) {
    throw InvalidInput("expression uses a variable beyond the plan dimension " + std::to_string(n));
  }
  CheckReport report("identity", plan);
  ResidualTracker tracker(plan);
  sample_points(plan, [&](const Point& p) {
    double a, b;
    try {
      a = eval_scalar(e1, p);
      b = eval_scalar(e2, p);
    } catch (const DomainError&) {
      return Admission::domain;
    }
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    tracker.observe(std::abs(a - b), scale, p);
    return Admission::accepted;
  });
  report.conditions.push_back(tracker.record("equal", e1.to_string() + " == " + e2.to_string()));
  return report;
}

}  // namespace hydroham
