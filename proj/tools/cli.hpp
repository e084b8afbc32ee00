#pragma once

#include <iosfwd>

namespace curveforge::cli {

enum ExitCode : int {
  kOk = 0,
  kMisuse = 2,     // bad flags or arguments
  kInput = 3,      // parse, domain, or invalid initial data
  kNumerical = 4,  // chart boundary without --restart, restart limit, failed checks
};

/// Runs one command line (argv[0] is the program name) and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curveforge::cli
