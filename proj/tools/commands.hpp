#pragma once

#include <map>
#include <ostream>
#include <string>

#include "config.hpp"

namespace mbloch::cli {

using Summary = std::map<std::string, double>;

// Executes one command, writing its primary CSV/JSON output to `out`.
// Returns scalar results for sweep rows. Throws mbloch::regime_error for
// physical-regime violations and other exceptions for solver errors.
Summary run_command(const RunConfig& cfg, std::ostream& out);

// Full entry point used by main(): validation, output file handling,
// sweep worker pool. Returns the process exit code (0 ok, 2 config error,
// 3 solver error, 4 regime violation).
int run(const RunConfig& cfg, bool validate_only = false);

} // namespace mbloch::cli
