#include "hydroham/hydrosys.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hydroham/eval.hpp"
#include "hydroham/geometry.hpp"

namespace hydroham {

HydroSystem::HydroSystem(int n) : n_(n), v_(static_cast<std::size_t>(n) * n) {
  if (n < 1) throw InvalidInput("system dimension must be >= 1");
}

HydroSystem HydroSystem::from_speeds(const std::vector<Expr>& speeds) {
  HydroSystem s(static_cast<int>(speeds.size()));
  for (int i = 0; i < s.n_; ++i) s.v(i, i) = -speeds[i];
  s.diagonal_ = true;
  return s;
}

Eigen::MatrixXd HydroSystem::evaluate(const Point& p) const {
  if (p.dimension() != n_) throw InvalidInput("point dimension does not match the system");
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) m(i, j) = v(i, j).value(p);
  }
  return m;
}

std::vector<double> HydroSystem::speeds(const Point& p) const {
  std::vector<double> out;
  for (int i = 0; i < n_; ++i) out.push_back(-v(i, i).value(p));
  return out;
}

HydroSystem HydroSystem::truncated(int n) const {
  if (n < 1 || n > n_) throw InvalidInput("truncation size out of range");
  HydroSystem s(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Field& f = v(i, j);
      if (!f.expr()) throw InvalidInput("cannot truncate a system with composite entries");
      if (f.expr()->max_variable_index() > n) {
        throw InvalidInput("entry " + f.describe() + " depends on a dropped variable");
      }
      s.v(i, j) = f;
    }
  }
  s.diagonal_ = diagonal_;
  return s;
}

void HydroSystem::validate() const {
  if (n_ < 1) throw InvalidInput("system dimension must be >= 1");
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const auto& e = v(i, j).expr();
      if (!e) continue;
      if (e->max_variable_index() > n_) {
        throw InvalidInput("system entry " + e->to_string() + " uses a variable beyond dimension " +
                           std::to_string(n_));
      }
      if (diagonal_ && i != j && !e->is_zero()) {
        throw InvalidInput("system flagged diagonal has a nonzero off-diagonal entry at (" + std::to_string(i + 1) +
                           "," + std::to_string(j + 1) + ")");
      }
    }
  }
}

Point PointChangeMap::apply(const Point& p) const {
  std::vector<double> out;
  out.reserve(forward.size());
  for (const auto& e : forward) out.push_back(eval_scalar(e, p));
  return Point(std::move(out));
}

Point PointChangeMap::apply_inverse(const Point& p) const {
  if (!inverse) throw InvalidInput("map has no inverse");
  std::vector<double> out;
  out.reserve(inverse->size());
  for (const auto& e : *inverse) out.push_back(eval_scalar(e, p));
  return Point(std::move(out));
}

PointChangeMap PointChangeMap::inverted() const {
  if (!inverse) throw InvalidInput("map has no inverse");
  return PointChangeMap{*inverse, forward};
}

namespace {

void require_plan(int n, const SamplePlan& plan) {
  if (plan.dimension() != n) throw InvalidInput("sample plan dimension differs from the system");
}

// Rows of ConservedCurrent residual: d_k rho v^k_l + d_l sigma.
PointResidual current_residual(const HydroSystem& s, const ConservedCurrent& c, const Point& p) {
  const int n = s.dimension();
  const Jet rho = c.rho.jet(p, 1);
  const Jet sigma = c.sigma.jet(p, 1);
  const Eigen::MatrixXd v = s.evaluate(p);
  PointResidual r;
  for (int l = 0; l < n; ++l) {
    TermSum t;
    for (int k = 0; k < n; ++k) t.add(rho.d(k) * v(k, l));
    t.add(sigma.d(l));
    r.add(t);
  }
  return r;
}

}  // namespace

CheckReport check_conserved_current(const HydroSystem& s, const ConservedCurrent& c, const SamplePlan& plan) {
  s.validate();
  require_plan(s.dimension(), plan);
  CheckReport report("conserved_current", plan);
  ResidualTracker tracker(plan);
  sample_points(plan, [&](const Point& p) {
    PointResidual r;
    try {
      r = current_residual(s, c, p);
    } catch (const DomainError&) {
      return Admission::domain;
    }
    tracker.observe(r, p);
    return Admission::accepted;
  });
  report.conditions.push_back(tracker.record("conserved", "d_k rho v^k_l + d_l sigma = 0"));
  return report;
}

CheckReport check_change_of_variables(const HydroSystem& old_system, const HydroSystem& new_system,
                                      const PointChangeMap& map, const SamplePlan& plan) {
  old_system.validate();
  new_system.validate();
  const int n = old_system.dimension();
  if (new_system.dimension() != n || map.dimension() != n) {
    throw InvalidInput("systems and map differ in dimension");
  }
  require_plan(n, plan);
  CheckReport report("change_of_variables", plan);
  ResidualTracker conj(plan);
  std::optional<Point> first_singular;
  const SampleStats stats = sample_points(plan, [&](const Point& p) {
    Eigen::MatrixXd J(n, n), vold, vnew;
    try {
      for (int i = 0; i < n; ++i) {
        const Jet f = eval_jet(map.forward[i], p, 1);
        for (int k = 0; k < n; ++k) J(i, k) = f.d(k);
      }
      if (!(std::abs(scaled_determinant(J)) >= kDegeneracyFloor)) {
        if (!first_singular) first_singular = p;
        return Admission::degenerate;
      }
      vold = old_system.evaluate(p);
      vnew = new_system.evaluate(map.apply(p));
    } catch (const DomainError&) {
      return Admission::domain;
    }
    PointResidual r;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        TermSum t;
        for (int k = 0; k < n; ++k) {
          t.add(J(i, k) * vold(k, j));
          t.add(-vnew(i, k) * J(k, j));
        }
        r.add(t);
      }
    }
    conj.observe(r, p);
    return Admission::accepted;
  });

  ConditionRecord js;
  js.id = "jacobian_nonsingular";
  js.description = "scaled |det J| >= 1e-8";
  js.max_residual = stats.degenerate_fraction();
  js.witness = js.max_residual > 0.0 ? first_singular : std::nullopt;
  js.passed = !stats.exhausted && js.max_residual <= 0.2;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d of %d attempted points had a singular Jacobian", stats.degenerate_rejects,
                stats.attempts);
  js.note = buf;
  report.conditions.push_back(js);
  auto c = conj.record("conjugacy", "J v_old(u) = v_new(m(u)) J");
  if (!js.passed) {
    c.evaluated = false;
    c.passed = false;
    c.note = "not evaluated: Jacobian singular";
  }
  report.conditions.push_back(c);
  return report;
}

CheckReport check_map_round_trip(const PointChangeMap& map, const SamplePlan& plan) {
  if (!map.inverse) throw InvalidInput("round trip needs an inverse map");
  require_plan(map.dimension(), plan);
  CheckReport report("map_round_trip", plan);
  ResidualTracker tracker(plan);
  sample_points(plan, [&](const Point& p) {
    Point q;
    try {
      q = map.apply_inverse(map.apply(p));
    } catch (const DomainError&) {
      return Admission::domain;
    }
    double defect = 0.0, scale = 1.0;
    for (int i = 0; i < p.dimension(); ++i) {
      const double d = std::abs(q[i] - p[i]);
      if (std::isnan(d) || d > defect) defect = d;
      scale = std::max(scale, std::abs(p[i]));
    }
    tracker.observe(defect, scale, p);
    return Admission::accepted;
  });
  report.conditions.push_back(tracker.record("round_trip", "inverse(forward(u)) = u"));
  return report;
}

HydroSystem reciprocal_transform_system(const HydroSystem& s, const ConservedCurrent& c1,
                                        const ConservedCurrent& c2, const SamplePlan& plan) {
  s.validate();
  const int n = s.dimension();
  require_plan(n, plan);
  for (const auto* c : {&c1, &c2}) {
    const CheckReport r = check_conserved_current(s, *c, plan);
    if (!r.passed()) {
      const auto& rec = r.conditions.front();
      char buf[200];
      std::snprintf(buf, sizeof buf, "current (%s, %s) is not conserved: divergence residual %.3e",
                    c->rho.describe().c_str(), c->sigma.describe().c_str(), rec.max_residual);
      throw ReciprocalError(buf);
    }
  }

  // sigma^ = -sigma, so sigma^_1 I - rho_1 v = -(sigma_1 I + rho_1 v)
  sample_points(plan, [&](const Point& p) {
    Eigen::MatrixXd den;
    try {
      const Eigen::MatrixXd v = s.evaluate(p);
      den = -c1.sigma.value(p) * Eigen::MatrixXd::Identity(n, n) - c1.rho.value(p) * v;
    } catch (const DomainError&) {
      return Admission::domain;
    }
    if (!(std::abs(scaled_determinant(den)) >= kDegeneracyFloor)) {
      throw ReciprocalError("transformation denominator vanishes at " + to_string(p));
    }
    return Admission::accepted;
  });

  HydroSystem out(n);
  if (s.diagonal()) {
    out.set_diagonal(true);
    for (int i = 0; i < n; ++i) {
      const Field vii = s.v(i, i);
      auto fn = [vii, c1, c2](const Point& p, int order) {
        const Jet v = vii.jet(p, order);
        const Jet num = c2.rho.jet(p, order) * v + c2.sigma.jet(p, order);
        const Jet den = -(c1.sigma.jet(p, order) + c1.rho.jet(p, order) * v);
        if (den.value() == 0.0) throw DomainError("reciprocal denominator vanishes", "sigma_1 + rho_1 lambda");
        return num / den;
      };
      out.v(i, i) = Field::callable("reciprocal v(" + std::to_string(i + 1) + "," + std::to_string(i + 1) + ")", fn);
    }
    return out;
  }

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      auto fn = [s, c1, c2, n, a, b](const Point& p, int order) {
        std::vector<Jet> den, num;
        const Jet r1 = c1.rho.jet(p, order), s1 = c1.sigma.jet(p, order);
        const Jet r2 = c2.rho.jet(p, order), s2 = c2.sigma.jet(p, order);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            const Jet v = s.v(i, j).jet(p, order);
            Jet d = -(r1 * v);
            Jet m = r2 * v;
            if (i == j) {
              d -= s1;
              m += s2;
            }
            den.push_back(d);
            num.push_back(m);
          }
        }
        std::vector<Jet> inv;
        try {
          inv = invert_jet_matrix(den, n);
        } catch (const std::domain_error&) {
          throw DomainError("reciprocal denominator singular", "sigma^_1 I - rho_1 v");
        }
        Jet acc(p.dimension(), order);
        for (int k = 0; k < n; ++k) acc += inv[a * n + k] * num[k * n + b];
        return acc;
      };
      out.v(a, b) = Field::callable("reciprocal v(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")", fn);
    }
  }
  return out;
}

ConservedCurrent time_preserving_current() { return {Expr::constant(0), Expr::constant(-1)}; }

ConservedCurrent space_preserving_current() { return {Expr::constant(1), Expr::constant(0)}; }

}  // namespace hydroham
