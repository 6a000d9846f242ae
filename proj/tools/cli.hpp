#pragma once

#include <iosfwd>

namespace padictree::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kPrecisionError = 3,
  kFieldTooSmall = 4,
};

/// Parses argv, runs one subcommand and returns the exit code. Results go to
/// out (or --output); failures are reported on err as one JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace padictree::cli
