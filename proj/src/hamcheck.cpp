#include "hydroham/hamcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <utility>

#include "hydroham/errors.hpp"
#include "hydroham/eval.hpp"

namespace hydroham {

void LocalOperator::validate() const {
  g.validate();
  b.validate();
  if (g.dimension != b.dimension) throw InvalidInput("metric and connection dimensions differ");
}

void NonlocalOperator::validate() const {
  local.validate();
  for (const auto& w : tails) {
    w.validate();
    if (w.dimension != local.dimension()) throw InvalidInput("affinor dimension differs from the metric");
  }
}

namespace {

// Shared bookkeeping for conditions (i)-(iv), (v) and the degeneracy policy.
struct MetricConditions {
  explicit MetricConditions(const SamplePlan& plan)
      : symmetric(plan), connection(plan), compatible(plan), flat(plan) {}

  ResidualTracker symmetric;
  ResidualTracker connection;
  ResidualTracker compatible;
  ResidualTracker flat;
  std::optional<Point> first_degenerate;

  // (i), (iii), (iv) at an admitted point.
  void observe(const PointFrame& f, const Tensor3& b) {
    const int n = f.g_upper.rows();
    PointResidual sym;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        TermSum t;
        t.add(f.g_upper(i, j));
        t.add(-f.g_upper(j, i));
        sym.add(t);
      }
    }
    symmetric.observe(sym, f.point);

    // Gamma^j_{sk} = -g_{si} b^{ij}_k
    Tensor3 gamma(n), gamma_scale(n);
    for (int j = 0; j < n; ++j) {
      for (int s = 0; s < n; ++s) {
        for (int k = 0; k < n; ++k) {
          TermSum t;
          for (int i = 0; i < n; ++i) t.add(-f.g_lower(s, i) * b(i, j, k));
          gamma(j, s, k) = t.sum;
          gamma_scale(j, s, k) = t.scale;
        }
      }
    }
    PointResidual cs;
    for (int j = 0; j < n; ++j) {
      for (int s = 0; s < n; ++s) {
        for (int k = 0; k < n; ++k) {
          cs.add(std::abs(gamma(j, s, k) - gamma(j, k, s)), std::max(gamma_scale(j, s, k), gamma_scale(j, k, s)));
        }
      }
    }
    connection.observe(cs, f.point);

    // nabla_k g^{ij} = d_k g^{ij} + Gamma^i_{sk} g^{sj} + Gamma^j_{sk} g^{is}
    PointResidual mc;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          TermSum t;
          t.add(f.dg_upper[k](i, j));
          for (int s = 0; s < n; ++s) {
            t.add(gamma(i, s, k) * f.g_upper(s, j));
            t.add(gamma(j, s, k) * f.g_upper(i, s));
          }
          mc.add(t);
        }
      }
    }
    compatible.observe(mc, f.point);
  }

  void observe_flatness(const PointFrame& f) {
    const auto& c = *f.curvature;
    const int n = f.g_upper.rows();
    PointResidual r;
    for (int j = 0; j < n; ++j) {
      for (int s = 0; s < n; ++s) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) r.add(std::abs(c.lower(j, s, k, l)), c.lower_scale(j, s, k, l));
        }
      }
    }
    flat.observe(r, f.point);
  }
};

struct Admitted {
  PointFrame frame;
  Tensor3 b;
};

// Evaluate the local part at p or classify the rejection.
Admission admit(const LocalOperator& a, const Point& p, int frame_order, std::optional<Point>& first_degenerate,
                std::optional<Admitted>& out) {
  try {
    const Eigen::MatrixXd g = evaluate(a.g, p);
    if (!(std::abs(scaled_determinant(g)) >= kDegeneracyFloor)) {
      if (!first_degenerate) first_degenerate = p;
      return Admission::degenerate;
    }
    Tensor3 b = evaluate(a.b, p);
    out = Admitted{make_frame(a.g, p, frame_order), std::move(b)};
    return Admission::accepted;
  } catch (const DomainError&) {
    return Admission::domain;
  } catch (const DegenerateMetricError&) {
    if (!first_degenerate) first_degenerate = p;
    return Admission::degenerate;
  }
}

ConditionRecord nondegeneracy_record(const SampleStats& stats, const std::optional<Point>& first_degenerate) {
  ConditionRecord r;
  r.id = condition::kNondegenerate;
  r.description = "metric nondegenerate (scaled |det g| >= 1e-8)";
  r.max_residual = stats.degenerate_fraction();
  r.witness = r.max_residual > 0.0 ? first_degenerate : std::nullopt;
  r.passed = !stats.exhausted && r.max_residual <= kMaxDegenerateFraction;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d of %d attempted points degenerate%s", stats.degenerate_rejects,
                stats.attempts, stats.exhausted ? "; resample budget exhausted" : "");
  r.note = buf;
  return r;
}

ConditionRecord gated(ConditionRecord r, bool metric_ok) {
  if (!metric_ok) {
    r.evaluated = false;
    r.passed = false;
    r.max_residual = 0.0;
    r.witness.reset();
    r.note = "not evaluated: metric degenerate";
  }
  return r;
}

std::string lambda_label(double lambda) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "lambda=%g/", lambda);
  return buf;
}

}  // namespace

CheckReport check_skew_adjoint(const LocalOperator& a, const SamplePlan& plan) {
  a.validate();
  const int n = a.dimension();
  if (plan.dimension() != n) throw InvalidInput("sample plan dimension differs from the operator");
  CheckReport report("skew_adjoint", plan);
  ResidualTracker sym(plan), conn(plan);
  sample_points(plan, [&](const Point& p) {
    Eigen::MatrixXd g;
    Tensor3 b;
    std::vector<Jet> gj;
    try {
      b = evaluate(a.b, p);
      for (const auto& e : a.g.entries) gj.push_back(eval_jet(e, p, 1));
    } catch (const DomainError&) {
      return Admission::domain;
    }
    PointResidual rs, rc;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        TermSum t;
        t.add(gj[i * n + j].value());
        t.add(-gj[j * n + i].value());
        rs.add(t);
        for (int k = 0; k < n; ++k) {
          TermSum c;
          c.add(b(i, j, k));
          c.add(b(j, i, k));
          c.add(-gj[i * n + j].d(k));
          rc.add(c);
        }
      }
    }
    sym.observe(rs, p);
    conn.observe(rc, p);
    return Admission::accepted;
  });
  report.conditions.push_back(sym.record(condition::kSkewSymmetricMetric, "g^{ij} = g^{ji}"));
  report.conditions.push_back(conn.record(condition::kSkewConnection, "b^{ij}_k + b^{ji}_k = d_k g^{ij}"));
  return report;
}

CheckReport check_local_hamiltonian(const LocalOperator& a, const SamplePlan& plan) {
  a.validate();
  if (plan.dimension() != a.dimension()) throw InvalidInput("sample plan dimension differs from the operator");
  CheckReport report("local_hamiltonian", plan);
  MetricConditions mc(plan);
  const SampleStats stats = sample_points(plan, [&](const Point& p) {
    std::optional<Admitted> ad;
    const Admission res = admit(a, p, 2, mc.first_degenerate, ad);
    if (res != Admission::accepted) return res;
    mc.observe(ad->frame, ad->b);
    mc.observe_flatness(ad->frame);
    return res;
  });
  const ConditionRecord nd = nondegeneracy_record(stats, mc.first_degenerate);
  const bool ok = nd.passed;
  auto sym = mc.symmetric.record(condition::kSymmetricMetric, "g^{ij} = g^{ji}");
  if (stats.accepted == 0) sym = gated(sym, false);
  report.conditions.push_back(sym);
  report.conditions.push_back(nd);
  report.conditions.push_back(
      gated(mc.connection.record(condition::kSymmetricConnection, "Gamma^j_{sk} = Gamma^j_{ks} for Gamma from b"), ok));
  report.conditions.push_back(
      gated(mc.compatible.record(condition::kMetricCompatible, "nabla_k g^{ij} = 0 under Gamma from b"), ok));
  report.conditions.push_back(gated(mc.flat.record(condition::kFlat, "R^j_{skl}(g) = 0"), ok));
  return report;
}

Tensor4 gauss_tail_sum(const std::vector<AffinorField>& tails, const Point& p) {
  const int n = p.dimension();
  Tensor4 out(n);
  for (const auto& w : tails) {
    const Eigen::MatrixXd m = evaluate(w, p);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) out(i, j, k, l) += w.sign * (m(i, l) * m(j, k) - m(i, k) * m(j, l));
        }
      }
    }
  }
  return out;
}

CheckReport check_ferapontov(const NonlocalOperator& a, const SamplePlan& plan, FerapontovOptions options) {
  a.validate();
  const int n = a.dimension();
  const auto N = static_cast<std::size_t>(n);
  if (plan.dimension() != n) throw InvalidInput("sample plan dimension differs from the operator");
  CheckReport report("ferapontov", plan);
  MetricConditions mc(plan);
  ResidualTracker t1(plan), t2(plan), t3(plan), t4(plan);

  const SampleStats stats = sample_points(plan, [&](const Point& p) {
    std::optional<Admitted> ad;
    std::vector<std::vector<Jet>> wj(a.tails.size());
    try {
      for (std::size_t al = 0; al < a.tails.size(); ++al) {
        for (const auto& e : a.tails[al].entries) wj[al].push_back(eval_jet(e, p, 1));
      }
    } catch (const DomainError&) {
      return Admission::domain;
    }
    const Admission res = admit(a.local, p, 2, mc.first_degenerate, ad);
    if (res != Admission::accepted) return res;
    const PointFrame& f = ad->frame;
    mc.observe(f, ad->b);
    if (options.with_flatness) mc.observe_flatness(f);

    auto W = [&](std::size_t al, int i, int j) { return wj[al][i * N + j].value(); };
    PointResidual r1, r2, r3, r4;
    for (std::size_t al = 0; al < a.tails.size(); ++al) {
      // T1: g_{ik} w^k_j = g_{jk} w^k_i
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          TermSum t;
          for (int k = 0; k < n; ++k) {
            t.add(f.g_lower(i, k) * W(al, k, j));
            t.add(-f.g_lower(j, k) * W(al, k, i));
          }
          r1.add(t);
        }
      }
      // T2: nabla_k w^i_j - nabla_j w^i_k
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = j + 1; k < n; ++k) {
            TermSum t;
            t.add(wj[al][i * N + j].d(k));
            t.add(-wj[al][i * N + k].d(j));
            for (int s = 0; s < n; ++s) {
              t.add(f.gamma(i, s, k) * W(al, s, j));
              t.add(-f.gamma(s, j, k) * W(al, i, s));
              t.add(-f.gamma(i, s, j) * W(al, s, k));
              t.add(f.gamma(s, k, j) * W(al, i, s));
            }
            r2.add(t);
          }
        }
      }
      // T4: [w_a, w_b] = 0
      for (std::size_t be = al + 1; be < a.tails.size(); ++be) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            TermSum t;
            for (int k = 0; k < n; ++k) {
              t.add(W(al, i, k) * W(be, k, j));
              t.add(-W(be, i, k) * W(al, k, j));
            }
            r4.add(t);
          }
        }
      }
    }
    // T3: Gauss
    const Curvature& c = *f.curvature;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            TermSum t;
            t.add(c.raised(i, j, k, l));
            for (std::size_t al = 0; al < a.tails.size(); ++al) {
              const int eps = a.tails[al].sign;
              t.add(-eps * W(al, i, l) * W(al, j, k));
              t.add(eps * W(al, i, k) * W(al, j, l));
            }
            r3.add(std::abs(t.sum), std::max(t.scale, c.raised_scale(i, j, k, l)));
          }
        }
      }
    }
    t1.observe(r1, p);
    t2.observe(r2, p);
    t3.observe(r3, p);
    t4.observe(r4, p);
    return Admission::accepted;
  });

  const ConditionRecord nd = nondegeneracy_record(stats, mc.first_degenerate);
  const bool ok = nd.passed;
  auto sym = mc.symmetric.record(condition::kSymmetricMetric, "g^{ij} = g^{ji}");
  if (stats.accepted == 0) sym = gated(sym, false);
  report.conditions.push_back(sym);
  report.conditions.push_back(nd);
  report.conditions.push_back(
      gated(mc.connection.record(condition::kSymmetricConnection, "Gamma^j_{sk} = Gamma^j_{ks} for Gamma from b"), ok));
  report.conditions.push_back(
      gated(mc.compatible.record(condition::kMetricCompatible, "nabla_k g^{ij} = 0 under Gamma from b"), ok));
  if (options.with_flatness) {
    report.conditions.push_back(gated(mc.flat.record(condition::kFlat, "R^j_{skl}(g) = 0"), ok));
  }
  report.conditions.push_back(
      gated(t1.record(condition::kAffinorSelfAdjoint, "g_{ik} w^k_{aj} = g_{jk} w^k_{ai}"), ok));
  report.conditions.push_back(gated(t2.record(condition::kCodazzi, "nabla_k w^i_{aj} = nabla_j w^i_{ak}"), ok));
  report.conditions.push_back(gated(
      t3.record(condition::kGauss, "R^{ij}_{kl} = sum_a eps_a (w^i_{al} w^j_{ak} - w^i_{ak} w^j_{al})"), ok));
  report.conditions.push_back(gated(t4.record(condition::kAffinorsCommute, "[w_a, w_b] = 0"), ok));
  return report;
}

LocalOperator pencil_member(const LocalOperator& a, const LocalOperator& b, double lambda) {
  if (a.dimension() != b.dimension()) throw InvalidInput("pencil operators differ in dimension");
  // lambda enters the trees as an exact rational: dyadic if it is one,
  // otherwise rounded to 9 decimals
  Expr l;
  const double dyadic = lambda * 1024.0;
  if (!std::isfinite(lambda) || std::abs(lambda) > 1e6) throw InvalidInput("pencil parameter out of range");
  if (dyadic == std::round(dyadic)) {
    l = Expr::constant(Rational(std::llround(dyadic), 1024));
  } else {
    l = Expr::constant(Rational(std::llround(lambda * 1e9), 1000000000));
  }
  LocalOperator out{MetricField(a.dimension()), ConnectionField(a.dimension())};
  for (std::size_t i = 0; i < out.g.entries.size(); ++i) out.g.entries[i] = a.g.entries[i] + l * b.g.entries[i];
  for (std::size_t i = 0; i < out.b.entries.size(); ++i) out.b.entries[i] = a.b.entries[i] + l * b.b.entries[i];
  return out;
}

CheckReport check_pencil_compatibility(const LocalOperator& a, const LocalOperator& b,
                                       const std::vector<double>& lambdas, const SamplePlan& plan) {
  a.validate();
  b.validate();
  if (a.dimension() != b.dimension()) throw InvalidInput("pencil operators differ in dimension");
  CheckReport report("pencil", plan);

  std::vector<std::pair<double, CheckReport>> members;
  std::vector<double> degenerate;
  std::set<double> anchors;
  for (double lambda : lambdas) {
    CheckReport r = check_local_hamiltonian(pencil_member(a, b, lambda), plan);
    if (!r.condition(condition::kNondegenerate).passed) {
      degenerate.push_back(lambda);
    } else if (r.passed()) {
      anchors.insert(lambda);
    }
    members.emplace_back(lambda, std::move(r));
  }

  // The Schouten bracket [A + l B, A + l B] = [A,A] + 2l [A,B] + l^2 [B,B] is
  // quadratic in l. Where the pencil metric degenerates the metric criteria
  // do not apply, but three Hamiltonian members (A itself counting as l = 0
  // and B as l = infinity) force the bracket to vanish for every l.
  int support = static_cast<int>(anchors.size());
  if (!degenerate.empty()) {
    if (!anchors.count(0.0) && check_local_hamiltonian(a, plan).passed()) ++support;
    if (check_local_hamiltonian(b, plan).passed()) ++support;
  }

  for (auto& [lambda, r] : members) {
    const bool is_degenerate = std::find(degenerate.begin(), degenerate.end(), lambda) != degenerate.end();
    if (!is_degenerate) {
      report.absorb(r, lambda_label(lambda));
      continue;
    }
    const ConditionRecord& nd = r.condition(condition::kNondegenerate);
    ConditionRecord c;
    c.id = lambda_label(lambda) + "jacobi_by_interpolation";
    c.description = "bracket of A + lambda B vanishes (quadratic in lambda, fixed by three Hamiltonian members)";
    char buf[200];
    if (support >= 3) {
      std::snprintf(buf, sizeof buf, "pencil metric degenerate (%s); decided by %d Hamiltonian members", nd.note.c_str(),
                    support);
    } else {
      c.passed = false;
      c.evaluated = false;
      std::snprintf(buf, sizeof buf, "pencil metric degenerate (%s); only %d Hamiltonian members, need 3",
                    nd.note.c_str(), support);
    }
    c.note = buf;
    report.conditions.push_back(c);
    report.notes.push_back(lambda_label(lambda) + " " + c.note);
  }
  return report;
}

HydroSystem hamiltonian_flow(const LocalOperator& a, const Expr& hamiltonian) {
  a.validate();
  const int n = a.dimension();
  if (hamiltonian.max_variable_index() > n) throw InvalidInput("Hamiltonian density uses variables beyond the operator");
  HydroSystem s(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      auto fn = [a, hamiltonian, i, k, n](const Point& p, int order) {
        if (order + 2 > kMaxJetOrder) throw InvalidInput("hamiltonian_flow supports jets up to order 1");
        const Jet h = eval_jet(hamiltonian, p, order + 2);
        Jet acc(n, order);
        for (int j = 0; j < n; ++j) {
          const Jet dj = h.derivative(j);
          const Jet djk = dj.derivative(k);
          acc += Field(a.g(i, j)).jet(p, order) * djk;
          acc += Field(a.b(i, j, k)).jet(p, order) * dj.truncated(order);
        }
        return acc;
      };
      s.v(i, k) = Field::callable("hamiltonian_flow v(" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ")", fn);
    }
  }
  return s;
}

}  // namespace hydroham
