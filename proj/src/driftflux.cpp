#include "hydroham/driftflux.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hydroham/errors.hpp"
#include "hydroham/eval.hpp"
#include "hydroham/geometry.hpp"

namespace hydroham::driftflux {

namespace {

// Slots used while transcribing printed operators.
constexpr int kFirstDx = 4;   // r1x, r2x, r3x
constexpr int kTheta = 7;     // theta
constexpr int kThetaR3 = 8;   // theta_r3

const VariableTable& transcription_table() {
  static const VariableTable table = [] {
    VariableTable t;
    for (int i = 1; i <= 3; ++i) {
      t.add("r" + std::to_string(i), i);
      t.add("r" + std::to_string(i) + "x", kFirstDx + i - 1);
    }
    t.add("theta", kTheta);
    t.add("theta_r3", kThetaR3);
    return t;
  }();
  return table;
}

Expr r(const std::string& text) { return parse_expr(text, 3); }

void require_function_of_r3(const Expr& e, const char* what) {
  if (e.max_variable_index() > 3 || e.depends_on(1) || e.depends_on(2)) {
    throw InvalidInput(std::string(what) + " must be a function of r3 only, got " + e.to_string());
  }
}

struct Printed {
  int n;
  std::string prefactor;
  std::vector<std::string> diag;  // metric = prefactor * diag(...)
  std::string coefficient;        // in front of the matrix of r_x terms
  std::vector<std::string> m;     // row-major, linear in r1x..r3x
};

LocalOperator transcribe(const Printed& op, const Expr& theta) {
  const int n = op.n;
  const auto& table = transcription_table();
  const std::map<int, Expr> theta_slots{{kTheta, theta}, {kThetaR3, derivative(theta, 3)}};
  const std::map<int, Expr> no_dx{{kFirstDx, Expr()}, {kFirstDx + 1, Expr()}, {kFirstDx + 2, Expr()}};
  auto read = [&](const std::string& text) { return substitute(parse_expr(text, table), theta_slots); };

  const Expr pre = read(op.prefactor);
  const Expr coef = read(op.coefficient);
  LocalOperator a{MetricField(n), ConnectionField(n)};
  for (int i = 0; i < n; ++i) a.g(i, i) = pre * read(op.diag[i]);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Expr entry = pre * coef * read(op.m[static_cast<std::size_t>(i) * n + j]);
      for (int k = 0; k < n; ++k) {
        const Expr b = derivative(entry, kFirstDx + k);
        for (int s = kFirstDx; s < kFirstDx + 3; ++s) {
          if (b.depends_on(s)) throw std::logic_error("printed entry is not linear in r_x: " + entry.to_string());
        }
        a.b(i, j, k) = substitute(b, no_dx);
      }
    }
  }
  a.validate();
  return a;
}

double sum_eps(const std::array<int, 3>& eps, const std::array<Rational, 3>& x, const std::array<Rational, 3>& y,
               double* scale) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double t = eps[a] * boost::rational_cast<double>(x[a]) * boost::rational_cast<double>(y[a]);
    s += t;
    *scale = std::max(*scale, std::abs(t));
  }
  return s;
}

}  // namespace

HydroSystem build_system_S() {
  HydroSystem s = HydroSystem::from_speeds({r("r1 + r2 + 1"), r("r1 + r2 - 1"), r("r1 + r2")});
  s.validate();
  return s;
}

HydroSystem build_system_S_tilde() {
  HydroSystem s(3);
  const char* rows[3][3] = {
      {"-u3", "0", "-u1"},
      {"0", "-u3", "-u2"},
      {"-1/(u1 + u2)", "-1/(u1 + u2)", "-u3"},
  };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s.v(i, j) = r(rows[i][j]);
  }
  s.validate();
  return s;
}

HydroSystem build_system_S0() { return build_system_S().truncated(2); }

PointChangeMap riemann_map() {
  PointChangeMap m;
  m.forward = {r("(u3 + ln(u1 + u2))/2"), r("(u3 - ln(u1 + u2))/2"), r("u2/u1")};
  m.inverse = std::vector<Expr>{r("exp(u1 - u2)/(1 + u3)"), r("u3*exp(u1 - u2)/(1 + u3)"), r("u1 + u2")};
  return m;
}

SamplePlan riemann_plan(int count) {
  SamplePlan p;
  p.box = {{-0.7, 0.7}, {-0.7, 0.7}, {0.1, 1.0}};
  p.count = count;
  return p;
}

SamplePlan s_tilde_plan(int count) {
  SamplePlan p;
  p.box = {{0.1, 1.0}, {0.1, 1.0}, {-1.0, 1.0}};
  p.count = count;
  return p;
}

Expr default_theta() { return r("1 + r3^2"); }
Expr default_lambda1() { return r("r3"); }
Expr default_lambda2() { return r("r3^2"); }

LocalOperator build_nutku(int k) {
  switch (k) {
    case 1:
      return transcribe({2, "exp(r2 - r1)", {"-1", "1"}, "-1/2",
                         {"r2x - r1x", "r1x - r2x",
                          "r2x - r1x", "r1x - r2x"}},
                        Expr());
    case 2:
      return transcribe({2, "exp(r2 - r1)", {"1", "1"}, "1/2",
                         {"r2x - r1x", "-r1x - r2x",
                          "r1x + r2x", "r2x - r1x"}},
                        Expr());
    case 3:
      return transcribe({2, "exp(r2 - r1)", {"r1", "r2"}, "1/2",
                         {"(1 - r1)*r1x + r1*r2x", "-r2*r1x - r1*r2x",
                          "r2*r1x + r1*r2x", "-r2*r1x + (1 + r2)*r2x"}},
                        Expr());
    default:
      throw InvalidInput("Nutku operators are numbered 1, 2, 3");
  }
}

LocalOperator build_H1_Theta(const Expr& theta) {
  require_function_of_r3(theta, "Theta");
  return transcribe({3, "exp(r2 - r1)", {"-1", "1", "exp(r2 - r1)*theta"}, "-1/2",
                     {"r2x - r1x", "r1x - r2x", "-2*r3x",
                      "r2x - r1x", "r1x - r2x", "-2*r3x",
                      "2*r3x", "2*r3x", "-exp(r2 - r1)*(2*(r2x - r1x)*theta + r3x*theta_r3)"}},
                    theta);
}

ConstantBlock default_constant_block() {
  ConstantBlock cb;
  cb.c = {Rational(3), Rational(4), Rational(5)};
  cb.b1 = {Rational(4), Rational(-3), Rational(0)};
  cb.b2 = {Rational(0), Rational(5), Rational(4)};
  cb.b3 = {Rational(0), Rational(0), Rational(1, 5)};
  return cb;
}

void validate_constant_block(const ConstantBlock& cb) {
  for (int e : cb.eps) {
    if (e != 1 && e != -1) throw ConstraintViolation("epsilon must be +1 or -1");
  }
  struct Equation {
    const char* text;
    const std::array<Rational, 3>& y;
    double rhs;
  };
  const Equation eqs[] = {
      {"sum eps_a c_a^2 = 0", cb.c, 0.0},
      {"sum eps_a c_a b1_a = 0", cb.b1, 0.0},
      {"sum eps_a c_a b2_a = 0", cb.b2, 0.0},
      {"sum eps_a c_a b3_a = -1", cb.b3, -1.0},
  };
  for (const auto& eq : eqs) {
    double scale = 1.0;
    const double lhs = sum_eps(cb.eps, cb.c, eq.y, &scale);
    if (std::abs(lhs - eq.rhs) > 1e-12 * scale) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "constant block violates %s (left side %.6g)", eq.text, lhs);
      throw ConstraintViolation(buf);
    }
  }
}

void validate_lambda_independence(const Expr& lambda1, const Expr& lambda2) {
  require_function_of_r3(lambda1, "Lambda1");
  require_function_of_r3(lambda2, "Lambda2");
  const double triples[][3] = {{0.2, 0.55, 0.9}, {0.13, 0.41, 0.77}, {0.31, 0.62, 0.97}};
  for (const auto& t : triples) {
    Eigen::Matrix3d m;
    try {
      for (int i = 0; i < 3; ++i) {
        const Point p{0.0, 0.0, t[i]};
        m(i, 0) = eval_scalar(lambda1, p);
        m(i, 1) = eval_scalar(lambda2, p);
        m(i, 2) = 1.0;
      }
    } catch (const DomainError&) {
      continue;
    }
    if (std::abs(scaled_determinant(m)) >= kDegeneracyFloor) return;
  }
  throw ConstraintViolation("Lambda1, Lambda2 and 1 are linearly dependent");
}

std::array<Expr, 3> phi_functions(const Expr& lambda1, const Expr& lambda2, const ConstantBlock& cb) {
  std::array<Expr, 3> phi;
  for (int a = 0; a < 3; ++a) {
    phi[a] = Expr::constant(cb.b1[a]) * lambda1 + Expr::constant(cb.b2[a]) * lambda2 + Expr::constant(cb.b3[a]);
  }
  return phi;
}

namespace {

void check_prolongation_inputs(const Expr& theta, const Expr& lambda1, const Expr& lambda2, const ConstantBlock& cb,
                               Preconditions pre) {
  require_function_of_r3(theta, "Theta");
  require_function_of_r3(lambda1, "Lambda1");
  require_function_of_r3(lambda2, "Lambda2");
  if (pre == Preconditions::skip) return;
  if (cb.eps != std::array<int, 3>{1, 1, -1}) throw ConstraintViolation("epsilon must be (1, 1, -1)");
  validate_constant_block(cb);
  validate_lambda_independence(lambda1, lambda2);
}

}  // namespace

NonlocalOperator build_H2_hat(const Expr& theta, const Expr& lambda1, const Expr& lambda2, const ConstantBlock& cb,
                              Preconditions pre) {
  check_prolongation_inputs(theta, lambda1, lambda2, cb, pre);
  NonlocalOperator op;
  // theta_hat = e^{r2-r1} theta, so d theta_hat / d r3 = e^{r2-r1} theta_r3
  op.local = transcribe({3, "exp(r2 - r1)", {"1", "1", "exp(r2 - r1)*theta"}, "1/2",
                         {"r2x - r1x", "-r1x - r2x", "-2*r3x",
                          "r1x + r2x", "r2x - r1x", "2*r3x",
                          "2*r3x", "-2*r3x", "2*(r2x - r1x)*exp(r2 - r1)*theta + exp(r2 - r1)*theta_r3*r3x"}},
                        theta);
  const auto phi = phi_functions(lambda1, lambda2, cb);
  const Expr e = r("exp(r2 - r1)");
  for (int a = 0; a < 3; ++a) {
    AffinorField w(3, cb.eps[a]);
    const Expr c = Expr::constant(cb.c[a]);
    w(0, 0) = c;
    w(1, 1) = c;
    w(2, 2) = c + phi[a] * e;
    op.tails.push_back(w);
  }
  return op;
}

NonlocalOperator build_H3_hat(const Expr& theta, const Expr& lambda1, const Expr& lambda2, const ConstantBlock& cb,
                              Preconditions pre) {
  check_prolongation_inputs(theta, lambda1, lambda2, cb, pre);
  NonlocalOperator op;
  op.local = transcribe({3, "exp(r2 - r1)", {"r1", "r2", "exp(r2 - r1)*theta"}, "1/2",
                         {"r1x + r1*(r2x - r1x)", "-r2*r1x - r1*r2x", "-2*r1*r3x",
                          "r2*r1x + r1*r2x", "r2x + r2*(r2x - r1x)", "2*r2*r3x",
                          "2*r1*r3x", "-2*r2*r3x", "2*(r2x - r1x)*exp(r2 - r1)*theta + exp(r2 - r1)*theta_r3*r3x"}},
                        theta);
  const auto phi = phi_functions(lambda1, lambda2, cb);
  const Expr e = r("exp(r2 - r1)");
  const Expr s = r("r1 + r2");
  const Expr half = Expr::constant(Rational(1, 2));
  for (int a = 0; a < 3; ++a) {
    AffinorField w(3, cb.eps[a]);
    const Expr c = Expr::constant(cb.c[a]);
    w(0, 0) = c * (s + Expr::constant(1));
    w(1, 1) = c * (s - Expr::constant(1));
    w(2, 2) = c * s + half * phi[a] * e;
    op.tails.push_back(w);
  }
  return op;
}

std::array<LocalOperator, 3> build_remark_operators(const Expr& theta, RemarkVariant variant) {
  require_function_of_r3(theta, "Theta");
  const bool printed = variant == RemarkVariant::printed;
  const std::string m11 = printed ? "r2x - r1x" : "r1x - r2x";
  const std::string m12 = printed ? "r1x - r2x" : "r2x - r1x";
  return {
      transcribe({3, "exp(r1 - r2)", {"-1", "1", "exp(r2 - r1)*theta"}, "-1/2",
                  {m11, m12, "0",
                   m11, m12, "0",
                   "0", "0", "-exp(r2 - r1)*r3x*theta_r3"}},
                 theta),
      transcribe({3, "exp(r1 - r2)", {"1", "1", "exp(r2 - r1)*theta"}, "1/2",
                  {"r1x - r2x", "r1x + r2x", "0",
                   "-r1x - r2x", "r1x - r2x", "0",
                   "0", "0", "exp(r2 - r1)*r3x*theta_r3"}},
                 theta),
      transcribe({3, "exp(r1 - r2)", {"r1", "r2", "exp(r2 - r1)*theta"}, "1/2",
                  {"r1x + r1*r1x - r1*r2x", "r2*r1x + r1*r2x", "0",
                   "-r2*r1x - r1*r2x", "r2*r1x + r2x - r2*r2x", "0",
                   "0", "0", "exp(r2 - r1)*r3x*theta_r3"}},
                 theta),
  };
}

ConservedCurrent remark_time_current() { return time_preserving_current(); }

ConservedCurrent remark_space_current() { return {r("exp(r1 - r2)"), r("(r1 + r2)*exp(r1 - r2)")}; }

ProlongationAnsatz h2_ansatz(const ConstantBlock& cb, const Expr& lambda1, const Expr& lambda2) {
  ProlongationAnsatz a;
  a.eps = cb.eps;
  a.phi = phi_functions(lambda1, lambda2, cb);
  for (int i = 0; i < 3; ++i) a.psi[i] = Expr::constant(cb.c[i]) * r("exp(r1 - r2)");
  return a;
}

ProlongationAnsatz h3_ansatz(const ConstantBlock& cb, const Expr& lambda1, const Expr& lambda2) {
  ProlongationAnsatz a;
  a.eps = cb.eps;
  const auto phi = phi_functions(lambda1, lambda2, cb);
  for (int i = 0; i < 3; ++i) {
    a.psi[i] = Expr::constant(cb.c[i]) * r("(r1 + r2)*exp(r1 - r2)");
    a.phi[i] = phi[i] / Expr::constant(2);
  }
  return a;
}

std::array<AffinorField, 3> ansatz_affinors(const ProlongationAnsatz& a) {
  std::array<AffinorField, 3> out;
  const Expr e = r("exp(r2 - r1)");
  for (int i = 0; i < 3; ++i) {
    AffinorField w(3, a.eps[i]);
    w(0, 0) = e * derivative(a.psi[i], 1);
    w(1, 1) = -(e * derivative(a.psi[i], 2));
    w(2, 2) = e * (a.phi[i] + a.psi[i]);
    out[i] = w;
  }
  return out;
}

CheckReport kg_residual(const Expr& psi, const SamplePlan& plan) {
  if (plan.dimension() < 2) throw InvalidInput("Klein-Gordon check needs at least two variables");
  if (psi.max_variable_index() > plan.dimension()) throw InvalidInput("Psi uses a variable beyond the plan");
  for (int i = 3; i <= psi.max_variable_index(); ++i) {
    if (psi.depends_on(i)) throw InvalidInput("Psi must depend on (r1, r2) only, got " + psi.to_string());
  }
  CheckReport report("klein_gordon", plan);
  ResidualTracker tracker(plan);
  sample_points(plan, [&](const Point& p) {
    Jet j(p.dimension(), 2);
    try {
      j = eval_jet(psi, p, 2);
    } catch (const DomainError&) {
      return Admission::domain;
    }
    TermSum t;
    t.add(2.0 * j.d(0, 1));
    t.add(-j.d(1));
    t.add(j.d(0));
    PointResidual res;
    res.add(t);
    tracker.observe(res, p);
    return Admission::accepted;
  });
  report.conditions.push_back(tracker.record("klein_gordon", "2 Psi_{r1 r2} - Psi_{r2} + Psi_{r1} = 0"));
  return report;
}

namespace {

Expr kg_exponent_r2(Rational k) {
  if (k == Rational(1, 2)) throw InvalidInput("k = 1/2 is a pole of the exponent k/(1-2k)");
  return Expr::constant(k / (Rational(1) - 2 * k)) * r("r2");
}

}  // namespace

Expr kg_family_u(Rational k) { return exp(Expr::constant(k) * r("r1") + kg_exponent_r2(k)); }

Expr kg_family_u_printed(Rational k) {
  return exp(Expr::constant(k / 2) * r("r1") + kg_exponent_r2(k));
}

Expr kg_family_v(Rational k) {
  const Rational m = Rational(1) - 2 * k;
  return (Expr::constant(m * m) * r("r1") + r("r2")) * kg_family_u(k);
}

Expr kg_characteristic_J(const Expr& psi) {
  const Expr r1 = r("r1"), r2 = r("r2");
  const Expr two = Expr::constant(2);
  return psi * (r1 + r2) - two * r1 * derivative(psi, 1) + two * r2 * derivative(psi, 2);
}

ConstraintTag parse_constraint_tag(std::string_view tag) {
  static const std::pair<const char*, ConstraintTag> tags[] = {
      {"eq4a", ConstraintTag::eq4a}, {"eq4b", ConstraintTag::eq4b},   {"eq4c", ConstraintTag::eq4c},
      {"eq5", ConstraintTag::eq5},   {"eq7", ConstraintTag::eq7},     {"eq4a3", ConstraintTag::eq4a3},
      {"eq4b3", ConstraintTag::eq4b3},
  };
  for (const auto& [name, t] : tags) {
    if (tag == name) return t;
  }
  throw InvalidInput("unknown constraint equation '" + std::string(tag) + "'");
}

const char* to_string(ConstraintTag tag) {
  switch (tag) {
    case ConstraintTag::eq4a: return "eq4a";
    case ConstraintTag::eq4b: return "eq4b";
    case ConstraintTag::eq4c: return "eq4c";
    case ConstraintTag::eq5: return "eq5";
    case ConstraintTag::eq7: return "eq7";
    case ConstraintTag::eq4a3: return "eq4a3";
    case ConstraintTag::eq4b3: return "eq4b3";
  }
  return "?";
}

CheckReport constraint_residuals(const ProlongationAnsatz& a, ConstraintTag tag, const SamplePlan& plan,
                                 const Expr& omega, double C) {
  if (plan.dimension() != 3) throw InvalidInput("constraint residuals are sampled in (r1, r2, r3)");
  for (int i = 0; i < 3; ++i) {
    const CheckReport kg = kg_residual(a.psi[i], plan);
    if (!kg.passed()) {
      throw ConstraintViolation("Psi^" + std::to_string(i + 1) + " = " + a.psi[i].to_string() +
                                " does not solve the Klein-Gordon equation");
    }
    require_function_of_r3(a.phi[i], "Phi");
  }
  require_function_of_r3(omega, "Omega");

  static const char* descriptions[] = {
      "sum eps (Phi + Psi) Psi_{r1} = -e^{r1-r2}",
      "sum eps (Phi + Psi) Psi_{r2} = e^{r1-r2}",
      "sum eps Psi_{r1} Psi_{r2} = 0",
      "sum eps (Phi + Psi/2) Psi = Omega - e^{r1-r2}",
      "sum eps Psi^2 = C - 2 e^{r1-r2}",
      "sum eps (Phi + Psi) Psi_{r1} = (r1+r2+1) e^{r1-r2} / 2",
      "sum eps (Phi + Psi) Psi_{r2} = -(r1+r2-1) e^{r1-r2} / 2",
  };

  CheckReport report(std::string("constraint ") + to_string(tag), plan);
  ResidualTracker tracker(plan);
  sample_points(plan, [&](const Point& p) {
    TermSum t;
    try {
      const double e = std::exp(p[0] - p[1]);
      const double s = p[0] + p[1];
      for (int i = 0; i < 3; ++i) {
        const Jet psi = eval_jet(a.psi[i], p, 1);
        const double phi = eval_scalar(a.phi[i], p);
        const double eps = a.eps[i];
        switch (tag) {
          case ConstraintTag::eq4a:
          case ConstraintTag::eq4a3: t.add(eps * (phi + psi.value()) * psi.d(0)); break;
          case ConstraintTag::eq4b:
          case ConstraintTag::eq4b3: t.add(eps * (phi + psi.value()) * psi.d(1)); break;
          case ConstraintTag::eq4c: t.add(eps * psi.d(0) * psi.d(1)); break;
          case ConstraintTag::eq5: t.add(eps * (phi + 0.5 * psi.value()) * psi.value()); break;
          case ConstraintTag::eq7: t.add(eps * psi.value() * psi.value()); break;
        }
      }
      // subtract the right-hand side
      switch (tag) {
        case ConstraintTag::eq4a: t.add(e); break;
        case ConstraintTag::eq4b: t.add(-e); break;
        case ConstraintTag::eq4c: break;
        case ConstraintTag::eq5:
          t.add(-eval_scalar(omega, p));
          t.add(e);
          break;
        case ConstraintTag::eq7:
          t.add(-C);
          t.add(2.0 * e);
          break;
        case ConstraintTag::eq4a3: t.add(-0.5 * (s + 1.0) * e); break;
        case ConstraintTag::eq4b3: t.add(0.5 * (s - 1.0) * e); break;
      }
    } catch (const DomainError&) {
      return Admission::domain;
    }
    PointResidual res;
    res.add(t);
    tracker.observe(res, p);
    return Admission::accepted;
  });
  report.conditions.push_back(tracker.record(to_string(tag), descriptions[static_cast<int>(tag)]));
  return report;
}

}  // namespace hydroham::driftflux
