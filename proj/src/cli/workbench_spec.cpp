#include "hydroham/cli/workbench_spec.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "hydroham/errors.hpp"

namespace hydroham::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidInput(where + ": " + what);
}

std::string expression_text(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) return j.dump();
  fail(where, "expected an expression string");
}

Matrix read_matrix(const json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows");
  }
  Matrix m;
  for (int i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      fail(where, "row " + std::to_string(i + 1) + " must have " + std::to_string(cols) + " entries");
    }
    std::vector<std::string> r;
    for (int k = 0; k < cols; ++k) r.push_back(expression_text(row[k], where));
    m.push_back(std::move(r));
  }
  return m;
}

std::vector<Matrix> read_tensor(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) fail(where, "expected " + std::to_string(n) + " slices");
  std::vector<Matrix> t;
  for (int i = 0; i < n; ++i) t.push_back(read_matrix(j[i], n, n, where + "[" + std::to_string(i) + "]"));
  return t;
}

void allow_only(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      fail(where, "unknown field '" + key + "'");
    }
  }
}

}  // namespace

WorkbenchSpec parse_workbench_spec(const json& j) {
  allow_only(j,
             {"dimension", "variable_names", "metric", "b_tensor", "affinor_tails", "system", "system_diagonal",
              "currents", "checks", "sample_plan", "pencil_partner", "candidate_operators", "expected_system"},
             "spec");
  WorkbenchSpec s;
  s.source = j;
  if (!j.contains("dimension") || !j["dimension"].is_number_integer()) fail("dimension", "required integer");
  s.dimension = j["dimension"].get<int>();
  const int n = s.dimension;
  if (n < 1 || n > 8) fail("dimension", "must be between 1 and 8");

  if (j.contains("variable_names")) {
    const json& v = j["variable_names"];
    if (!v.is_array() || static_cast<int>(v.size()) != n) fail("variable_names", "expected one name per variable");
    std::set<std::string> seen;
    for (const auto& name : v) {
      if (!name.is_string()) fail("variable_names", "names must be strings");
      if (!seen.insert(name.get<std::string>()).second) fail("variable_names", "duplicate name");
      s.variable_names.push_back(name.get<std::string>());
    }
  }
  if (j.contains("metric")) s.metric = read_matrix(j["metric"], n, n, "metric");
  if (j.contains("b_tensor")) s.b_tensor = read_tensor(j["b_tensor"], n, "b_tensor");
  if (j.contains("affinor_tails")) {
    if (!j["affinor_tails"].is_array()) fail("affinor_tails", "expected a list");
    for (const auto& t : j["affinor_tails"]) {
      allow_only(t, {"epsilon", "matrix"}, "affinor_tails");
      TailSpec tail;
      if (!t.contains("epsilon") || !t["epsilon"].is_number_integer()) fail("affinor_tails", "epsilon required");
      tail.epsilon = t["epsilon"].get<int>();
      if (tail.epsilon != 1 && tail.epsilon != -1) fail("affinor_tails", "epsilon must be 1 or -1");
      if (!t.contains("matrix")) fail("affinor_tails", "matrix required");
      tail.matrix = read_matrix(t["matrix"], n, n, "affinor_tails.matrix");
      s.affinor_tails.push_back(std::move(tail));
    }
  }
  if (j.contains("system")) s.system = read_matrix(j["system"], n, n, "system");
  if (j.contains("system_diagonal")) {
    if (!j["system_diagonal"].is_boolean()) fail("system_diagonal", "expected a boolean");
    s.system_diagonal = j["system_diagonal"].get<bool>();
  }
  if (j.contains("expected_system")) s.expected_system = read_matrix(j["expected_system"], n, n, "expected_system");
  if (j.contains("currents")) {
    if (!j["currents"].is_array()) fail("currents", "expected a list");
    for (const auto& c : j["currents"]) {
      allow_only(c, {"rho", "sigma"}, "currents");
      if (!c.contains("rho") || !c.contains("sigma")) fail("currents", "rho and sigma required");
      s.currents.push_back({expression_text(c["rho"], "currents.rho"), expression_text(c["sigma"], "currents.sigma")});
    }
  }
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) fail("checks", "expected a list");
    for (const auto& c : j["checks"]) {
      if (!c.is_string()) fail("checks", "check ids are strings");
      const auto id = c.get<std::string>();
      const auto& known = known_checks();
      if (std::find(known.begin(), known.end(), id) == known.end()) fail("checks", "unknown check '" + id + "'");
      s.checks.push_back(id);
    }
  }
  if (j.contains("sample_plan")) {
    const json& p = j["sample_plan"];
    allow_only(p, {"count", "seed", "box", "tolerance", "floor"}, "sample_plan");
    if (p.contains("count")) {
      if (!p["count"].is_number_integer()) fail("sample_plan.count", "expected an integer");
      s.sample_plan.count = p["count"].get<int>();
    }
    if (p.contains("seed")) {
      if (!p["seed"].is_number_unsigned() && !p["seed"].is_number_integer()) fail("sample_plan.seed", "expected an integer");
      s.sample_plan.seed = p["seed"].get<std::uint64_t>();
    }
    if (p.contains("tolerance")) {
      if (!p["tolerance"].is_number()) fail("sample_plan.tolerance", "expected a number");
      s.sample_plan.tolerance = p["tolerance"].get<double>();
    }
    if (p.contains("floor")) {
      if (!p["floor"].is_number()) fail("sample_plan.floor", "expected a number");
      s.sample_plan.floor = p["floor"].get<double>();
    }
    if (p.contains("box")) {
      const json& b = p["box"];
      if (!b.is_array() || static_cast<int>(b.size()) != n) fail("sample_plan.box", "expected one interval per variable");
      std::vector<Interval> box;
      for (const auto& iv : b) {
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
          fail("sample_plan.box", "intervals are [lo, hi] pairs");
        }
        box.push_back({iv[0].get<double>(), iv[1].get<double>()});
      }
      s.sample_plan.box = std::move(box);
    }
  }
  if (j.contains("pencil_partner")) {
    const json& p = j["pencil_partner"];
    allow_only(p, {"metric", "b_tensor", "lambdas"}, "pencil_partner");
    PencilSpec ps;
    if (!p.contains("metric") || !p.contains("b_tensor")) fail("pencil_partner", "metric and b_tensor required");
    ps.metric = read_matrix(p["metric"], n, n, "pencil_partner.metric");
    ps.b_tensor = read_tensor(p["b_tensor"], n, "pencil_partner.b_tensor");
    if (p.contains("lambdas")) {
      if (!p["lambdas"].is_array()) fail("pencil_partner.lambdas", "expected a list of numbers");
      for (const auto& l : p["lambdas"]) {
        if (!l.is_number()) fail("pencil_partner.lambdas", "expected a list of numbers");
        ps.lambdas.push_back(l.get<double>());
      }
    } else {
      ps.lambdas = {-2.0, -1.0, 0.5, 1.0, 3.0};
    }
    s.pencil_partner = std::move(ps);
  }
  if (j.contains("candidate_operators")) {
    if (!j["candidate_operators"].is_array()) fail("candidate_operators", "expected a list");
    int index = 0;
    for (const auto& c : j["candidate_operators"]) {
      allow_only(c, {"name", "metric", "b_tensor"}, "candidate_operators");
      OperatorSpec op;
      op.name = c.contains("name") ? c["name"].get<std::string>() : "candidate " + std::to_string(++index);
      if (!c.contains("metric") || !c.contains("b_tensor")) fail("candidate_operators", "metric and b_tensor required");
      op.metric = read_matrix(c["metric"], n, n, "candidate_operators.metric");
      op.b_tensor = read_tensor(c["b_tensor"], n, "candidate_operators.b_tensor");
      s.candidate_operators.push_back(std::move(op));
    }
  }
  return s;
}

WorkbenchSpec load_workbench_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read spec file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInput("spec file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_workbench_spec(j);
}

namespace {

VariableTable table_for(const WorkbenchSpec& s) {
  VariableTable t = VariableTable::standard(s.dimension);
  for (int i = 0; i < static_cast<int>(s.variable_names.size()); ++i) {
    if (!t.find(s.variable_names[i])) t.add(s.variable_names[i], i + 1);
  }
  return t;
}

LocalOperator local_operator(const Matrix& g, const std::vector<Matrix>& b, const VariableTable& t, int n) {
  LocalOperator a{MetricField(n), ConnectionField(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a.g(i, j) = parse_expr(g[i][j], t);
      for (int k = 0; k < n; ++k) a.b(i, j, k) = parse_expr(b[i][j][k], t);
    }
  }
  a.validate();
  return a;
}

HydroSystem system_from(const Matrix& m, bool diagonal, const VariableTable& t, int n) {
  HydroSystem s(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s.v(i, j) = parse_expr(m[i][j], t);
  }
  s.set_diagonal(diagonal);
  s.validate();
  return s;
}

void require(bool ok, const std::string& check, const char* what) {
  if (!ok) throw InvalidInput("check '" + check + "' needs " + what);
}

}  // namespace

Workbench materialize(const WorkbenchSpec& spec) {
  Workbench w;
  const int n = spec.dimension;
  w.dimension = n;
  w.table = table_for(spec);

  if (spec.metric || spec.b_tensor) {
    if (!spec.metric || !spec.b_tensor) throw InvalidInput("metric and b_tensor must be given together");
    w.local = local_operator(*spec.metric, *spec.b_tensor, w.table, n);
  }
  for (const auto& t : spec.affinor_tails) {
    AffinorField f(n, t.epsilon);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) f(i, j) = parse_expr(t.matrix[i][j], w.table);
    }
    f.validate();
    w.tails.push_back(std::move(f));
  }
  if (spec.system) w.system = system_from(*spec.system, spec.system_diagonal, w.table, n);
  if (spec.expected_system) w.expected_system = system_from(*spec.expected_system, false, w.table, n);
  for (const auto& c : spec.currents) {
    w.currents.push_back({parse_expr(c.rho, w.table), parse_expr(c.sigma, w.table)});
  }
  if (spec.pencil_partner) {
    w.pencil_partner = local_operator(spec.pencil_partner->metric, spec.pencil_partner->b_tensor, w.table, n);
    w.lambdas = spec.pencil_partner->lambdas;
  }
  for (const auto& c : spec.candidate_operators) {
    w.candidates.emplace_back(c.name, local_operator(c.metric, c.b_tensor, w.table, n));
  }

  w.plan = SamplePlan::uniform(n);
  const auto& p = spec.sample_plan;
  if (p.count) w.plan.count = *p.count;
  if (p.seed) w.plan.seed = *p.seed;
  if (p.box) w.plan.box = *p.box;
  if (p.tolerance) w.plan.tolerance = *p.tolerance;
  if (p.floor) w.plan.floor = *p.floor;
  w.plan.validate();

  for (const auto& c : spec.checks) {
    if (c == "skew_adjoint" || c == "local_hamiltonian" || c == "ferapontov") {
      require(w.local.has_value(), c, "metric and b_tensor");
    } else if (c == "pencil") {
      require(w.local.has_value(), c, "metric and b_tensor");
      require(w.pencil_partner.has_value(), c, "pencil_partner");
    } else if (c == "conserved_currents") {
      require(w.system.has_value(), c, "system");
      require(!w.currents.empty(), c, "currents");
    }
  }
  return w;
}

}  // namespace hydroham::cli
