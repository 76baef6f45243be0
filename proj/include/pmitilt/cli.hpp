#pragma once
//
// Command-line front end. `run` takes the arguments after the program name
// and never calls std::exit, so tests can drive it in-process.
//
// Exit codes:
//   0  success, or every requested check passed
//   1  a check failed, or a countable normalizer is not certified finite
//   2  malformed input or bad usage
//   3  zero-mass context (solve, construct) without --skip-zero-mass
//   4  coverage mismatch: inputs do not cover what was requested
//   5  any other domain error (inadmissible signal, degenerate problem, ...)
//

#include <ostream>
#include <string>
#include <vector>

namespace pmitilt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitSchema = 2,
  kExitZeroMass = 3,
  kExitCoverage = 4,
  kExitDomain = 5,
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmitilt::cli
