#pragma once

#include <ostream>

namespace monocurv::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kInvalidInput = 2,
  kCrossCheckFailed = 3,
  kConjectureViolation = 4,
};

/// Entry point of the `monocurv` tool; reports go to `out` (unless an
/// output file is requested), diagnostics to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace monocurv::cli
