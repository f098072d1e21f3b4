#pragma once

// Command-line front end. The executable in tools/ is a thin wrapper over
// run(), which tests can drive in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rkhm/error.hpp"

namespace rkhm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitReject = 3,
  kExitConfig = 4,
  kExitData = 5,
  kExitNumerical = 6,
};

int exit_code_for(ErrorCode code);

/// args excludes the program name, e.g. {"two-sample", "--x", "a.csv", ...}.
/// Reports go to --out when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses and validates a config document, filling defaults. The result is
/// what reports embed under "config".
nlohmann::json resolve_config(const nlohmann::json& raw);

}  // namespace rkhm::cli
