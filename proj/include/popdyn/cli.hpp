#pragma once

#include <iosfwd>

namespace popdyn {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUserError = 2,
  kExitNumericFailure = 3,
};

/// Runs `popdyn <subcommand> ...` with argv[0] being the program name.
/// Reports go to `out`, diagnostics (and the simulate summary, unless
/// redirected) to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace popdyn
