#include "hydroham/report.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hydroham/errors.hpp"

namespace hydroham {

bool CheckReport::passed() const {
  for (const auto& c : conditions) {
    if (!c.passed || !c.evaluated) return false;
  }
  return true;
}

const ConditionRecord* CheckReport::find(const std::string& id) const {
  for (const auto& c : conditions) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const ConditionRecord& CheckReport::condition(const std::string& id) const {
  if (const auto* c = find(id)) return *c;
  throw std::out_of_range("no condition '" + id + "' in report '" + subject + "'");
}

std::vector<std::string> CheckReport::failed_ids() const {
  std::vector<std::string> out;
  for (const auto& c : conditions) {
    if (!c.passed || !c.evaluated) out.push_back(c.id);
  }
  return out;
}

void CheckReport::absorb(const CheckReport& other, const std::string& prefix) {
  for (auto c : other.conditions) {
    c.id = prefix + c.id;
    conditions.push_back(std::move(c));
  }
  for (const auto& n : other.notes) notes.push_back(prefix + n);
}

void TermSum::add(double term) {
  sum += term;
  scale = std::max(scale, std::abs(term));
}

void PointResidual::add(const TermSum& component) { add(std::abs(component.sum), component.scale); }

void PointResidual::add(double d, double s) {
  // NaN must not be swallowed by std::max
  if (std::isnan(d) || d > defect) defect = d;
  scale = std::max(scale, s);
}

void ResidualTracker::observe(double defect, double scale, const Point& p) {
  double normalized;
  if (std::isnan(defect) || std::isnan(scale)) {
    normalized = std::numeric_limits<double>::infinity();
  } else if (defect == 0.0) {
    normalized = 0.0;
  } else {
    normalized = defect / std::max(scale, std::numeric_limits<double>::min());
  }
  const bool ok = !std::isnan(defect) && defect <= tolerance_ * scale + floor_;
  if (!ok) passed_ = false;
  if (normalized > max_) {
    max_ = normalized;
    witness_ = p;
  }
}

ConditionRecord ResidualTracker::record(std::string id, std::string description) const {
  ConditionRecord r;
  r.id = std::move(id);
  r.description = std::move(description);
  r.max_residual = max_;
  r.witness = max_ > 0.0 ? witness_ : std::nullopt;
  r.passed = passed_;
  return r;
}

SampleStats sample_points(const SamplePlan& plan, const std::function<Admission(const Point&)>& visit) {
  plan.validate();
  SampleStats stats;
  for (int i = 0; i < plan.count; ++i) {
    bool done = false;
    bool saw_degenerate = false;
    for (int attempt = 0; attempt <= plan.retry_budget; ++attempt) {
      ++stats.attempts;
      const Admission a = visit(plan.point(i, attempt));
      if (a == Admission::accepted) {
        ++stats.accepted;
        done = true;
        break;
      }
      if (a == Admission::domain) {
        ++stats.domain_rejects;
      } else {
        ++stats.degenerate_rejects;
        saw_degenerate = true;
      }
    }
    if (!done) {
      if (saw_degenerate) {
        stats.exhausted = true;
        return stats;
      }
      throw DomainTooHostile("domain too hostile: sample " + std::to_string(i) + " rejected " +
                             std::to_string(plan.retry_budget + 1) + " times");
    }
  }
  return stats;
}

}  // namespace hydroham
