#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hydroham::cli {

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInvalid = 2;

/// Entry point of hydroham-cli; `args` excludes the program name.
///   check <spec.json> [--samples N] [--seed S] [--tol T] [--json]
///   preset <name> [params] [--json]
///   reciprocal <spec.json> [--json]
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Names accepted by `preset`.
const std::vector<std::string>& preset_names();

}  // namespace hydroham::cli
