#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hydroham/sampling.hpp"

namespace hydroham {

struct ConditionRecord {
  std::string id;
  std::string description;
  /// Largest normalized residual seen (scale-free, see ResidualTracker).
  double max_residual = 0.0;
  /// Point of the worst residual; present iff max_residual > 0.
  std::optional<Point> witness;
  bool passed = true;
  /// False when an earlier failure made the condition meaningless.
  bool evaluated = true;
  std::string note;
};

struct PlanEcho {
  std::uint64_t seed = 0;
  int count = 0;
  double tolerance = 0.0;
  double floor = 0.0;

  static PlanEcho of(const SamplePlan& plan) {
    return {plan.seed, plan.count, plan.tolerance, plan.floor};
  }
};

class CheckReport {
 public:
  CheckReport() = default;
  CheckReport(std::string subject, const SamplePlan& plan)
      : subject(std::move(subject)), plan(PlanEcho::of(plan)) {}

  std::string subject;
  PlanEcho plan;
  std::vector<ConditionRecord> conditions;
  std::vector<std::string> notes;

  /// Conjunction over conditions; an unevaluated condition does not pass.
  bool passed() const;

  const ConditionRecord* find(const std::string& id) const;
  /// Throws std::out_of_range for unknown ids.
  const ConditionRecord& condition(const std::string& id) const;

  /// Ids of the failed conditions in report order.
  std::vector<std::string> failed_ids() const;

  /// Append the conditions of `other` with ids prefixed by `prefix`.
  void absorb(const CheckReport& other, const std::string& prefix);
};

/// Accumulates the terms of one scalar identity "sum of terms = 0".
struct TermSum {
  double sum = 0.0;
  double scale = 0.0;

  void add(double term);
};

/// Per-point residual over the components of a tensor identity. The scale
/// is the largest term magnitude across all components at that point.
struct PointResidual {
  double defect = 0.0;
  double scale = 0.0;

  void add(const TermSum& component);
  void add(double defect, double scale);
};

/// Max-reduction of pointwise residuals for one condition.
///
/// A point passes iff defect <= tolerance * scale + floor; the reported
/// residual is defect / scale (0 when both vanish).
class ResidualTracker {
 public:
  ResidualTracker(double tolerance, double floor) : tolerance_(tolerance), floor_(floor) {}
  explicit ResidualTracker(const SamplePlan& plan) : ResidualTracker(plan.tolerance, plan.floor) {}

  void observe(const PointResidual& r, const Point& p) { observe(r.defect, r.scale, p); }
  void observe(double defect, double scale, const Point& p);

  double max_residual() const { return max_; }
  bool passed() const { return passed_; }

  ConditionRecord record(std::string id, std::string description) const;

 private:
  double tolerance_;
  double floor_;
  double max_ = 0.0;
  std::optional<Point> witness_;
  bool passed_ = true;
};

enum class Admission { accepted, domain, degenerate };

struct SampleStats {
  int accepted = 0;
  int attempts = 0;
  int domain_rejects = 0;
  int degenerate_rejects = 0;
  /// A sample index ran out of attempts on degenerate points.
  bool exhausted = false;

  double degenerate_fraction() const {
    return attempts == 0 ? 0.0 : static_cast<double>(degenerate_rejects) / attempts;
  }
};

/// Visit plan.count admissible points in index order, resampling rejected
/// ones up to plan.retry_budget times each. Exhausting the budget on
/// domain failures alone throws DomainTooHostile; exhausting it with any
/// degenerate rejection stops early and sets `exhausted`.
SampleStats sample_points(const SamplePlan& plan, const std::function<Admission(const Point&)>& visit);

}  // namespace hydroham
