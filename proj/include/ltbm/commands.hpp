#pragma once

// Command dispatch behind the CLI and the C API. Each command writes
// line-delimited records "record=<type> key=value ..." with a fixed key
// order per type, plus a short human summary.

#include <ostream>
#include <string>
#include <vector>

#include "ltbm/config.hpp"
#include "ltbm/errors.hpp"

namespace ltbm {

enum ExitStatus : int {
  kExitOk = 0,
  kExitNone = 1,          // counterexample: nothing found
  kExitInconclusive = 2,  // counterexample: could not decide
  kExitModuleError = 3,
  kExitUsage = 64,
};

std::vector<std::string> command_names();

/// Module errors become one `record=error` line and kExitModuleError, with
/// the code stored in `error` when given; an unknown command gives kExitUsage.
int run_command(const RunConfig& cfg, const std::string& command, std::ostream& records, std::ostream& summary,
                ErrorCode* error = nullptr);

/// Writes the error record used for failures outside a command (config
/// loading, usage).
void write_error_record(std::ostream& records, const std::string& command, const std::string& code,
                        const std::string& message);

}  // namespace ltbm
