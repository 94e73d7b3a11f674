#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "optcon/error.h"

namespace optcon::cli {

// Process exit codes. Stable across releases.
enum ExitCode : int {
  kExitOk = 0,
  kExitRuntime = 1,     // divergence, or a run that is not semistable
  kExitValidation = 2,  // assumption or configuration failure
  kExitIo = 3,          // unreadable input, parse error, unwritable output
};

int ExitCodeFor(ErrorKind kind);

// Entry point shared by the executable and the tests. args excludes argv[0].
int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace optcon::cli
