#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hydroham/report.hpp"

namespace hydroham::cli {

struct NamedReport {
  std::string name;
  CheckReport report;
};

/// What one CLI invocation produced. Key order in the JSON form is fixed.
struct ReportDocument {
  std::string tool = "hydroham-cli";
  std::string version;
  std::string command;
  /// The input as run: the spec file with overrides applied, or the preset
  /// name and its parameters.
  nlohmann::json spec;
  std::vector<NamedReport> checks;
  /// Free-form output of the command (sampled speeds and the like).
  std::vector<std::string> lines;
  double wall_time_s = 0.0;

  bool passed() const;
};

nlohmann::ordered_json to_json(const ConditionRecord& c);
nlohmann::ordered_json to_json(const CheckReport& r);
nlohmann::ordered_json to_json(const ReportDocument& d);

/// One row per condition: status, residual to 3 digits and witness.
void print_human(const ReportDocument& d, std::ostream& out, bool color);

/// Color only on a terminal stdout and when NO_COLOR is unset.
bool want_color(const std::ostream& out);

}  // namespace hydroham::cli
