#pragma once

#include <iosfwd>

namespace seqattract::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,      // unexpected runtime error
  kConfigError = 2,  // bad flags, missing or malformed input files
};

/// Entry point of the `seqattract` tool. Diagnostics go to `err`, summaries
/// to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seqattract::cli
