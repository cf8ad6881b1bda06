#pragma once

#include <iosfwd>
#include <string>

namespace velobound {

struct RunOutcome {
  int exit_code = 0;
  int experiments = 0;
  int assertions_passed = 0;
  int assertions_failed = 0;
};

// Parse, validate, and execute every [experiment] / [experiment:name] section
// of the config.  Independent experiments run in parallel (bounded by
// max_worker_threads()); their console blocks are printed in declaration
// order.  validate_only stops each experiment after its precondition checks
// and writes no files.
//
// Exit code in the outcome, by precedence:
//   2 malformed config text / values        (ParseError)
//   3 invalid setup, precondition named     (ValidationError, invalid_argument)
//   4 runtime flag violation                (boundary mass, NaN, solver failure)
//   1 a declared assertion failed
//   0 success
RunOutcome run_config_file(const std::string& path, bool validate_only, std::ostream& out);

// VELOBOUND_THREADS when set to a positive integer, else hardware
// concurrency (at least 1).
int max_worker_threads();

}  // namespace velobound
