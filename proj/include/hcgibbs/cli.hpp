#pragma once

#include <ostream>

namespace hcgibbs {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitBadInput = 2,
  kExitPrecision = 3,
  kExitResourceCap = 4,
};

/// Entry point of the hcgibbs command; reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hcgibbs
