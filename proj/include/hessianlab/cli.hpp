#pragma once

#include <ostream>

namespace hessianlab::cli {

/// Exit codes of `run`.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kHypothesis = 2,
  kCheckFailed = 3,
};

/// Command-line entry point. Reports go to `out` (or the --out file),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hessianlab::cli
