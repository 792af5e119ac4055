#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sfebound::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,       ///< parse errors, malformed task, bad parameters, range errors
  kCompletelyInsecure = 3, ///< b_rand = 1
  kInvariantViolation = 4, ///< a verification or simulation check failed
};

/// Environment variable naming the default directory for figure CSVs.
inline constexpr const char* kOutDirEnv = "SFEBOUND_OUT_DIR";

/// Runs `sfebound <args...>` (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfebound::cli
