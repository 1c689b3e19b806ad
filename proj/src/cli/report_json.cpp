#include "hydroham/cli/report_json.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include <fmt/format.h>

namespace hydroham::cli {

using nlohmann::ordered_json;

bool ReportDocument::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const NamedReport& c) { return c.report.passed(); });
}

namespace {

// JSON has no inf/nan; keep them readable instead of null.
ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

ordered_json point_json(const std::optional<Point>& p) {
  if (!p) return nullptr;
  ordered_json a = ordered_json::array();
  for (int i = 0; i < p->dimension(); ++i) a.push_back(number((*p)[i]));
  return a;
}

}  // namespace

ordered_json to_json(const ConditionRecord& c) {
  ordered_json j;
  j["id"] = c.id;
  j["description"] = c.description;
  j["max_residual"] = number(c.max_residual);
  j["witness"] = point_json(c.witness);
  j["passed"] = c.passed;
  j["evaluated"] = c.evaluated;
  j["note"] = c.note;
  return j;
}

ordered_json to_json(const CheckReport& r) {
  ordered_json j;
  j["subject"] = r.subject;
  j["passed"] = r.passed();
  j["plan"] = {{"seed", r.plan.seed}, {"count", r.plan.count}, {"tolerance", r.plan.tolerance}, {"floor", r.plan.floor}};
  j["conditions"] = ordered_json::array();
  for (const auto& c : r.conditions) j["conditions"].push_back(to_json(c));
  j["notes"] = r.notes;
  return j;
}

ordered_json to_json(const ReportDocument& d) {
  ordered_json j;
  j["tool"] = d.tool;
  j["version"] = d.version;
  j["command"] = d.command;
  j["spec"] = ordered_json::parse(d.spec.dump());
  j["checks"] = ordered_json::array();
  for (const auto& c : d.checks) {
    ordered_json e;
    e["name"] = c.name;
    const ordered_json body = to_json(c.report);
    for (const auto& [k, v] : body.items()) e[k] = v;
    j["checks"].push_back(e);
  }
  j["output"] = d.lines;
  j["passed"] = d.passed();
  j["wall_time_s"] = d.wall_time_s;
  return j;
}

bool want_color(const std::ostream& out) {
  if (std::getenv("NO_COLOR") != nullptr) return false;
  return &out == &std::cout && isatty(STDOUT_FILENO);
}

namespace {

std::string witness_text(const std::optional<Point>& p) {
  if (!p) return "-";
  std::string s = "(";
  for (int i = 0; i < p->dimension(); ++i) s += fmt::format("{}{:.4g}", i ? ", " : "", (*p)[i]);
  return s + ")";
}

std::string paint(const std::string& s, const char* code, bool color) {
  return color ? fmt::format("\033[{}m{}\033[0m", code, s) : s;
}

}  // namespace

void print_human(const ReportDocument& d, std::ostream& out, bool color) {
  for (const auto& line : d.lines) out << line << '\n';
  for (const auto& c : d.checks) {
    const bool ok = c.report.passed();
    out << fmt::format("{} [{}] {}\n", paint(ok ? "PASS" : "FAIL", ok ? "32" : "31", color), c.name, c.report.subject);
    std::size_t width = 9;
    for (const auto& r : c.report.conditions) width = std::max(width, r.id.size());
    for (const auto& r : c.report.conditions) {
      const char* status = !r.evaluated ? "skip" : r.passed ? "ok" : "FAIL";
      const char* code = !r.evaluated ? "33" : r.passed ? "32" : "31";
      out << fmt::format("  {:<{}}  {}  {:.2e}  {}\n", r.id, width, paint(fmt::format("{:<4}", status), code, color),
                         r.max_residual, witness_text(r.witness));
      if (!r.note.empty() && (!r.passed || !r.evaluated)) out << "      " << r.note << '\n';
    }
    for (const auto& n : c.report.notes) out << "  note: " << n << '\n';
  }
  const bool ok = d.passed();
  out << fmt::format("overall: {} ({:.3f} s)\n", paint(ok ? "PASS" : "FAIL", ok ? "32" : "31", color), d.wall_time_s);
}

}  // namespace hydroham::cli
