#include "hydroham/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI/CLI.hpp>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "hydroham/cli/report_json.hpp"
#include "hydroham/cli/workbench_spec.hpp"
#include "hydroham/driftflux.hpp"
#include "hydroham/errors.hpp"
#include "hydroham/hamcheck.hpp"
#include "hydroham/identity.hpp"

#ifndef HYDROHAM_VERSION
#define HYDROHAM_VERSION "unknown"
#endif

namespace hydroham::cli {

namespace df = hydroham::driftflux;
using nlohmann::json;

namespace {

struct Overrides {
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool json = false;
};

SamplePlan with_overrides(SamplePlan p, const Overrides& o) {
  if (o.samples) p.count = *o.samples;
  if (o.seed) p.seed = *o.seed;
  if (o.tol) p.tolerance = *o.tol;
  p.validate();
  return p;
}

json plan_echo(const PlanEcho& p) {
  return {{"count", p.count}, {"seed", p.seed}, {"tolerance", p.tolerance}, {"floor", p.floor}};
}

bool identically_degenerate(const ReportDocument& d) {
  for (const auto& c : d.checks) {
    for (const auto& r : c.report.conditions) {
      const std::string& id = r.id;
      const std::string tail = condition::kNondegenerate;
      if (id.size() >= tail.size() && id.compare(id.size() - tail.size(), tail.size(), tail) == 0 &&
          r.max_residual >= 1.0) {
        return true;
      }
    }
  }
  return false;
}

using Clock = std::chrono::steady_clock;

int emit(ReportDocument& doc, Clock::time_point start, bool as_json, std::ostream& out, std::ostream& err) {
  doc.version = HYDROHAM_VERSION;
  doc.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  if (as_json) {
    out << to_json(doc).dump(2) << '\n';
  } else {
    print_human(doc, out, want_color(out));
  }
  if (identically_degenerate(doc)) {
    err << "error: metric is degenerate at every sample point\n";
    return kExitInvalid;
  }
  return doc.passed() ? kExitPass : kExitFail;
}

// ---- parameter parsing -----------------------------------------------------

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  auto bad = [&] { return InvalidInput("'" + text + "' is not a rational number"); };
  if (s.empty()) throw bad();
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to || to - from > 17) throw bad();
    long long v = 0;
    for (std::size_t k = from; k < to; ++k) {
      if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw bad();
      v = v * 10 + (s[k] - '0');
    }
    return v;
  };
  Rational r;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const long long den = digits(slash + 1, s.size());
    if (den == 0) throw bad();
    r = Rational(digits(i, slash), den);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    const long long whole = dot > i ? digits(i, dot) : 0;
    long long scale = 1;
    long long frac = 0;
    if (dot + 1 < s.size()) {
      frac = digits(dot + 1, s.size());
      for (std::size_t k = dot + 1; k < s.size(); ++k) scale *= 10;
    }
    r = Rational(whole) + Rational(frac, scale);
  } else {
    r = Rational(digits(i, s.size()));
  }
  return neg ? -r : r;
}

std::array<Rational, 3> parse_triple(const std::string& text) {
  std::array<Rational, 3> out;
  std::stringstream ss(text);
  std::string item;
  int n = 0;
  while (std::getline(ss, item, ',')) {
    if (n == 3) throw InvalidInput("'" + text + "' has more than three entries");
    out[n++] = parse_rational(item);
  }
  if (n != 3) throw InvalidInput("'" + text + "' needs three comma-separated entries");
  return out;
}

struct PresetParams {
  std::string theta, lambda1, lambda2;
  std::string c, b1, b2, b3;
  std::string k = "1";
  std::string variant = "printed";
  std::string eq = "eq4a,eq4b,eq4c,eq5";
  std::string ansatz = "h2";
  std::string omega = "0";
  double C = 0.0;
  bool printed_exponent = false;
};

struct PresetRun {
  std::vector<NamedReport> checks;
  std::vector<std::string> lines;
};

Expr expr_or(const std::string& text, const Expr& fallback) {
  return text.empty() ? fallback : parse_expr(text, 3);
}

df::ConstantBlock block_from(const PresetParams& p) {
  df::ConstantBlock cb = df::default_constant_block();
  if (!p.c.empty()) cb.c = parse_triple(p.c);
  if (!p.b1.empty()) cb.b1 = parse_triple(p.b1);
  if (!p.b2.empty()) cb.b2 = parse_triple(p.b2);
  if (!p.b3.empty()) cb.b3 = parse_triple(p.b3);
  return cb;
}

SamplePlan nutku_plan(int count) {
  SamplePlan p = df::riemann_plan(count);
  p.box.resize(2);
  return p;
}

void local_suite(PresetRun& run, const std::string& name, const LocalOperator& a, const SamplePlan& plan) {
  run.checks.push_back({name + " skew_adjoint", check_skew_adjoint(a, plan)});
  run.checks.push_back({name + " local_hamiltonian", check_local_hamiltonian(a, plan)});
}

// Entrywise v_got(u) = v_expected(u).
CheckReport systems_match(const HydroSystem& got, const HydroSystem& expected, const SamplePlan& plan) {
  if (got.dimension() != expected.dimension()) throw InvalidInput("expected_system has the wrong dimension");
  CheckReport report("transformed_system", plan);
  ResidualTracker tracker(plan);
  sample_points(plan, [&](const Point& p) {
    PointResidual r;
    try {
      const Eigen::MatrixXd a = got.evaluate(p);
      const Eigen::MatrixXd b = expected.evaluate(p);
      for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
          TermSum t;
          t.add(a(i, j));
          t.add(-b(i, j));
          r.add(t);
        }
      }
    } catch (const DomainError&) {
      return Admission::domain;
    }
    tracker.observe(r, p);
    return Admission::accepted;
  });
  report.conditions.push_back(tracker.record("matches_expected", "v~(u) equals the expected system"));
  return report;
}

// Characteristic speeds -v at each grid point: the diagonal of a diagonal
// system, eigenvalues otherwise.
std::vector<std::string> speed_table(const HydroSystem& s, const SamplePlan& plan) {
  const int n = s.dimension();
  std::vector<Point> grid;
  if (n <= 3) {
    const int total = static_cast<int>(std::pow(3, n));
    for (int idx = 0; idx < total; ++idx) {
      std::vector<double> c(n);
      int rest = idx;
      for (int i = 0; i < n; ++i) {
        const Interval& iv = plan.box[i];
        c[i] = iv.lo + (iv.hi - iv.lo) * (1 + rest % 3) / 4.0;
        rest /= 3;
      }
      grid.emplace_back(std::move(c));
    }
  } else {
    for (int i = 0; i < 8; ++i) grid.push_back(plan.point(i));
  }
  std::vector<std::string> lines;
  lines.push_back(s.diagonal() ? "speeds lambda~_i = -v~_ii (r_t~ + lambda~ r_x~ = 0) on a grid:"
                               : "eigenvalues of -v~ (r_t~ + lambda~ r_x~ = 0) on a grid:");
  for (const auto& p : grid) {
    std::string row = "  at (";
    for (int i = 0; i < p.dimension(); ++i) row += fmt::format("{}{:.4g}", i ? ", " : "", p[i]);
    row += "):";
    try {
      if (s.diagonal()) {
        for (double l : s.speeds(p)) row += fmt::format(" {:.6g}", l + 0.0);
      } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(-s.evaluate(p), false);
        for (int i = 0; i < n; ++i) {
          const auto z = es.eigenvalues()(i);
          row += std::abs(z.imag()) > 1e-12 ? fmt::format(" {:.6g}{:+.6g}i", z.real(), z.imag())
                                            : fmt::format(" {:.6g}", z.real());
        }
      }
    } catch (const DomainError& e) {
      row += std::string(" outside the domain (") + e.what() + ")";
    }
    lines.push_back(row);
  }
  return lines;
}

// ---- presets ---------------------------------------------------------------

using PresetFn = std::function<PresetRun(const PresetParams&, const Overrides&)>;

PresetRun preset_s(const PresetParams&, const Overrides& o) {
  PresetRun run;
  const SamplePlan plan = with_overrides(df::riemann_plan(), o);
  const HydroSystem s = df::build_system_S();
  run.checks.push_back({"S current (0, -1)", check_conserved_current(s, time_preserving_current(), plan)});
  run.checks.push_back({"S current (e^(r1-r2), (r1+r2) e^(r1-r2))",
                        check_conserved_current(s, df::remark_space_current(), plan)});
  return run;
}

PresetRun preset_s_tilde(const PresetParams&, const Overrides& o) {
  PresetRun run;
  const SamplePlan plan = with_overrides(df::s_tilde_plan(), o);
  run.checks.push_back({"S~ -> S", check_change_of_variables(df::build_system_S_tilde(), df::build_system_S(),
                                                             df::riemann_map(), plan)});
  run.checks.push_back({"riemann_map", check_map_round_trip(df::riemann_map(), plan)});
  return run;
}

PresetFn preset_nutku(int k) {
  return [k](const PresetParams&, const Overrides& o) {
    PresetRun run;
    local_suite(run, "H" + std::to_string(k), df::build_nutku(k), with_overrides(nutku_plan(100), o));
    return run;
  };
}

PresetRun preset_h1_theta(const PresetParams& p, const Overrides& o) {
  PresetRun run;
  const Expr theta = expr_or(p.theta, df::default_theta());
  run.lines.push_back("Theta = " + theta.to_string());
  local_suite(run, "H1_Theta", df::build_H1_Theta(theta), with_overrides(df::riemann_plan(), o));
  return run;
}

PresetFn preset_hat(int k) {
  return [k](const PresetParams& p, const Overrides& o) {
    PresetRun run;
    const Expr theta = expr_or(p.theta, df::default_theta());
    const Expr l1 = expr_or(p.lambda1, df::default_lambda1());
    const Expr l2 = expr_or(p.lambda2, df::default_lambda2());
    const df::ConstantBlock cb = block_from(p);
    const NonlocalOperator op = k == 2 ? df::build_H2_hat(theta, l1, l2, cb) : df::build_H3_hat(theta, l1, l2, cb);
    run.checks.push_back({"H" + std::to_string(k) + "^ ferapontov", check_ferapontov(op, with_overrides(df::riemann_plan(), o))});
    return run;
  };
}

PresetRun preset_remark_ops(const PresetParams& p, const Overrides& o) {
  PresetRun run;
  df::RemarkVariant variant;
  if (p.variant == "printed") {
    variant = df::RemarkVariant::printed;
  } else if (p.variant == "corrected") {
    variant = df::RemarkVariant::corrected;
  } else {
    throw InvalidInput("--variant must be 'printed' or 'corrected'");
  }
  const Expr theta = expr_or(p.theta, Expr::constant(1));
  const SamplePlan plan = with_overrides(df::riemann_plan(), o);
  const auto ops = df::build_remark_operators(theta, variant);
  for (int i = 0; i < 3; ++i) local_suite(run, "H~" + std::to_string(i + 1), ops[i], plan);
  return run;
}

PresetRun preset_kg_family(const PresetParams& p, const Overrides& o) {
  PresetRun run;
  const Rational k = parse_rational(p.k);
  const SamplePlan plan = with_overrides(df::riemann_plan(), o);
  const Expr u = df::kg_family_u(k);
  const Expr v = df::kg_family_v(k);
  run.lines.push_back("u = " + u.to_string());
  run.lines.push_back("v = " + v.to_string());
  run.checks.push_back({"u klein_gordon", df::kg_residual(u, plan)});
  run.checks.push_back({"v klein_gordon", df::kg_residual(v, plan)});
  const Expr lhs = Expr::constant(Rational(1) - 2 * k) * df::kg_characteristic_J(u);
  run.checks.push_back({"(1-2k) J[u] = v", expr_equal_numeric(lhs, v, plan)});
  CheckReport printed = df::kg_residual(df::kg_family_u_printed(k), plan);
  if (p.printed_exponent) {
    run.checks.push_back({"u printed exponent klein_gordon", printed});
  } else {
    run.lines.push_back(fmt::format("printed exponent {}: Klein-Gordon residual {:.3e} ({})",
                                    df::kg_family_u_printed(k).to_string(), printed.conditions.front().max_residual,
                                    printed.passed() ? "a solution" : "not a solution"));
  }
  return run;
}

PresetRun preset_constraints(const PresetParams& p, const Overrides& o) {
  PresetRun run;
  const df::ConstantBlock cb = block_from(p);
  df::validate_constant_block(cb);
  const Expr l1 = expr_or(p.lambda1, df::default_lambda1());
  const Expr l2 = expr_or(p.lambda2, df::default_lambda2());
  df::ProlongationAnsatz a;
  if (p.ansatz == "h2") {
    a = df::h2_ansatz(cb, l1, l2);
  } else if (p.ansatz == "h3") {
    a = df::h3_ansatz(cb, l1, l2);
  } else {
    throw InvalidInput("--ansatz must be 'h2' or 'h3'");
  }
  const Expr omega = parse_expr(p.omega, 3);
  const SamplePlan plan = with_overrides(df::riemann_plan(), o);
  std::stringstream ss(p.eq);
  std::string tag;
  while (std::getline(ss, tag, ',')) {
    const df::ConstraintTag t = df::parse_constraint_tag(tag);
    run.checks.push_back({df::to_string(t), df::constraint_residuals(a, t, plan, omega, p.C)});
  }
  if (run.checks.empty()) throw InvalidInput("--eq names no equation");
  return run;
}

PresetRun preset_reciprocal_remark(const PresetParams&, const Overrides& o) {
  PresetRun run;
  const SamplePlan plan = with_overrides(df::riemann_plan(), o);
  const HydroSystem s = df::build_system_S();
  const HydroSystem t = reciprocal_transform_system(s, df::remark_time_current(), df::remark_space_current(), plan);
  const Expr f = parse_expr("exp(r1 - r2)", 3);
  HydroSystem expected = HydroSystem::from_speeds({f, -f, Expr::constant(0)});
  run.checks.push_back({"S transformed", systems_match(t, expected, plan)});
  run.lines.push_back("v~ = diag(-exp(r1 - r2), exp(r1 - r2), 0) expected (r_t~ = v~ r_x~)");
  run.lines.push_back("lambda~ = (exp(r1 - r2), -exp(r1 - r2), 0) expected (r_t~ + lambda~ r_x~ = 0)");
  auto table = speed_table(t, plan);
  run.lines.insert(run.lines.end(), table.begin(), table.end());
  return run;
}

PresetRun preset_pencils(const PresetParams&, const Overrides& o) {
  PresetRun run;
  const std::vector<double> lambdas{-2.0, -1.0, 0.5, 1.0, 3.0};
  const SamplePlan p2 = with_overrides(nutku_plan(100), o);
  const SamplePlan p3 = with_overrides(df::riemann_plan(), o);
  const std::pair<int, int> pairs[] = {{1, 2}, {1, 3}, {2, 3}};
  for (auto [i, j] : pairs) {
    run.checks.push_back({fmt::format("(H{}, H{})", i, j),
                          check_pencil_compatibility(df::build_nutku(i), df::build_nutku(j), lambdas, p2)});
  }
  run.checks.push_back({"(H1_1, H1_r3)", check_pencil_compatibility(df::build_H1_Theta(Expr::constant(1)),
                                                                    df::build_H1_Theta(parse_expr("r3", 3)),
                                                                    lambdas, p3)});
  return run;
}

const std::map<std::string, PresetFn>& presets() {
  static const std::map<std::string, PresetFn> table{
      {"s", preset_s},
      {"s-tilde", preset_s_tilde},
      {"h1", preset_nutku(1)},
      {"h2", preset_nutku(2)},
      {"h3", preset_nutku(3)},
      {"h1-theta", preset_h1_theta},
      {"h2-hat", preset_hat(2)},
      {"h3-hat", preset_hat(3)},
      {"remark-ops", preset_remark_ops},
      {"kg-family", preset_kg_family},
      {"constraints", preset_constraints},
      {"reciprocal-remark", preset_reciprocal_remark},
      {"pencils", preset_pencils},
  };
  return table;
}

// ---- commands --------------------------------------------------------------

void apply_to_source(json& source, const SamplePlanSpec& p) {
  json& plan = source["sample_plan"];
  if (p.count) plan["count"] = *p.count;
  if (p.seed) plan["seed"] = *p.seed;
  if (p.tolerance) plan["tolerance"] = *p.tolerance;
}

int cmd_check(const std::string& path, const Overrides& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  WorkbenchSpec spec = load_workbench_spec(path);
  if (o.samples) spec.sample_plan.count = *o.samples;
  if (o.seed) spec.sample_plan.seed = *o.seed;
  if (o.tol) spec.sample_plan.tolerance = *o.tol;
  if (spec.checks.empty()) throw InvalidInput("spec requests no checks");
  const Workbench w = materialize(spec);

  ReportDocument doc;
  doc.command = "check";
  doc.spec = spec.source;
  apply_to_source(doc.spec, spec.sample_plan);
  for (const auto& id : spec.checks) {
    if (id == "skew_adjoint") {
      doc.checks.push_back({id, check_skew_adjoint(*w.local, w.plan)});
    } else if (id == "local_hamiltonian") {
      doc.checks.push_back({id, check_local_hamiltonian(*w.local, w.plan)});
    } else if (id == "ferapontov") {
      doc.checks.push_back({id, check_ferapontov(NonlocalOperator{*w.local, w.tails}, w.plan)});
    } else if (id == "pencil") {
      doc.checks.push_back({id, check_pencil_compatibility(*w.local, *w.pencil_partner, w.lambdas, w.plan)});
    } else if (id == "conserved_currents") {
      for (std::size_t i = 0; i < w.currents.size(); ++i) {
        doc.checks.push_back({fmt::format("conserved_current[{}]", i), check_conserved_current(*w.system, w.currents[i], w.plan)});
      }
    }
  }
  return emit(doc, start, o.json, out, err);
}

int cmd_reciprocal(const std::string& path, const Overrides& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  WorkbenchSpec spec = load_workbench_spec(path);
  if (o.samples) spec.sample_plan.count = *o.samples;
  if (o.seed) spec.sample_plan.seed = *o.seed;
  if (o.tol) spec.sample_plan.tolerance = *o.tol;
  const Workbench w = materialize(spec);
  if (!w.system) throw InvalidInput("reciprocal needs a system");
  if (w.currents.size() != 2) throw InvalidInput("reciprocal needs exactly two currents");

  ReportDocument doc;
  doc.command = "reciprocal";
  doc.spec = spec.source;
  apply_to_source(doc.spec, spec.sample_plan);
  for (int i = 0; i < 2; ++i) {
    doc.checks.push_back({fmt::format("current c{}", i + 1), check_conserved_current(*w.system, w.currents[i], w.plan)});
  }
  for (int i = 0; i < 2; ++i) {
    const CheckReport& r = doc.checks[i].report;
    if (!r.passed()) {
      err << fmt::format("error: current c{} is not conserved (divergence residual {:.3e}); not transforming\n", i + 1,
                         r.conditions.front().max_residual);
      emit(doc, start, o.json, out, err);
      return kExitFail;
    }
  }
  HydroSystem t;
  try {
    t = reciprocal_transform_system(*w.system, w.currents[0], w.currents[1], w.plan);
  } catch (const ReciprocalError& e) {
    err << "error: " << e.what() << '\n';
    emit(doc, start, o.json, out, err);
    return kExitFail;
  }
  doc.lines = speed_table(t, w.plan);
  if (w.expected_system) doc.checks.push_back({"expected_system", systems_match(t, *w.expected_system, w.plan)});
  for (const auto& [name, op] : w.candidates) {
    doc.checks.push_back({name + " local_hamiltonian", check_local_hamiltonian(op, w.plan)});
  }
  return emit(doc, start, o.json, out, err);
}

int cmd_preset(const std::string& name, const PresetParams& p, const Overrides& o, const json& echo, std::ostream& out,
               std::ostream& err) {
  const auto start = Clock::now();
  const auto& table = presets();
  const auto it = table.find(name);
  if (it == table.end()) throw InvalidInput("unknown preset '" + name + "'");
  PresetRun run = it->second(p, o);
  ReportDocument doc;
  doc.command = "preset";
  doc.spec = echo;
  if (!run.checks.empty()) doc.spec["plan"] = plan_echo(run.checks.front().report.plan);
  doc.checks = std::move(run.checks);
  doc.lines = std::move(run.lines);
  return emit(doc, start, o.json, out, err);
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : presets()) v.push_back(name);
    return v;
  }();
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks Hamiltonian operators of hydrodynamic type", "hydroham-cli"};
  app.set_version_flag("--version", HYDROHAM_VERSION);
  app.require_subcommand(1);

  Overrides o;
  auto add_overrides = [&o](CLI::App* sub, bool plan_flags) {
    if (plan_flags) {
      sub->add_option("--samples", o.samples, "sample count")->check(CLI::PositiveNumber);
      sub->add_option("--seed", o.seed, "sampling seed");
      sub->add_option("--tol", o.tol, "relative tolerance")->check(CLI::PositiveNumber);
    }
    sub->add_flag("--json", o.json, "print the JSON report");
  };

  std::string path;
  auto* check = app.add_subcommand("check", "run the checks a spec file requests");
  check->add_option("spec", path, "spec file")->required();
  add_overrides(check, true);

  auto* reciprocal = app.add_subcommand("reciprocal", "transform a system by two conserved currents");
  reciprocal->add_option("spec", path, "spec file")->required();
  add_overrides(reciprocal, true);

  std::string name;
  PresetParams p;
  auto* preset = app.add_subcommand("preset", "run a built-in drift-flux suite");
  preset->add_option("name", name, "one of: " + [] {
    std::string all;
    for (const auto& n : preset_names()) all += (all.empty() ? "" : ", ") + n;
    return all;
  }())->required();
  preset->add_option("--theta", p.theta, "Theta(r3)");
  preset->add_option("--lambda1", p.lambda1, "Lambda1(r3)");
  preset->add_option("--lambda2", p.lambda2, "Lambda2(r3)");
  preset->add_option("--c", p.c, "c as a,b,c");
  preset->add_option("--b1", p.b1, "b1 as a,b,c");
  preset->add_option("--b2", p.b2, "b2 as a,b,c");
  preset->add_option("--b3", p.b3, "b3 as a,b,c");
  preset->add_option("--k", p.k, "family parameter (rational)");
  preset->add_option("--variant", p.variant, "remark-ops: printed or corrected");
  preset->add_option("--eq", p.eq, "constraints: comma-separated equation tags");
  preset->add_option("--ansatz", p.ansatz, "constraints: h2 or h3");
  preset->add_option("--omega", p.omega, "constraints: Omega(r3)");
  preset->add_option("--C", p.C, "constraints: the constant C");
  preset->add_flag("--printed-exponent", p.printed_exponent, "kg-family: check the printed exponent too");
  add_overrides(preset, true);

  std::vector<const char*> argv{"hydroham-cli"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    if (check->parsed()) return cmd_check(path, o, out, err);
    if (reciprocal->parsed()) return cmd_reciprocal(path, o, out, err);
    json echo{{"preset", name}};
    for (const auto* opt : preset->get_options()) {
      const std::string lname = opt->get_single_name();
      if (opt->count() > 0 && lname != "name" && lname != "help" && lname != "json") echo["params"][lname] = opt->as<std::string>();
    }
    return cmd_preset(name, p, o, echo, out, err);
  } catch (const ConstraintViolation& e) {
    err << "error: constraint violated: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err << "error: cannot parse expression: " << e.what() << '\n';
  } catch (const DegenerateMetricError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInvalid;
}

}  // namespace hydroham::cli
