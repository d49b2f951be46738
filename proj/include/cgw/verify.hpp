#pragma once

#include <string>
#include <vector>

namespace cgw {

enum class VerifyScale {
  quick,  ///< a few small instances, fast enough for a smoke test
  full,   ///< the whole grid, exact-rational and double modes
  broken, ///< one deliberately corrupted instance; must FAIL (self-test)
};

struct VerifyOutcome {
  std::string label;
  enum class Status { pass, fail, skip } status = Status::pass;
  /// Worst total-variation distance observed across classes and root types.
  double worst_tv = 0.0;
  std::string note;
};

/// Compare the brute-force conditioned law against the direct construction
/// (every positive-probability class and root type, plus the mixture
/// identity) over a grid of finite models and built-in events.  Exact mode
/// requires total variation identically zero; double mode requires < 1e-10.
std::vector<VerifyOutcome> run_verification(VerifyScale scale);

/// True when nothing failed (skips are allowed).
bool verification_passed(const std::vector<VerifyOutcome>& outcomes);

/// One line per outcome: "PASS <label> tv=<...>".
std::string format_verification_report(const std::vector<VerifyOutcome>& outcomes);

}  // namespace cgw
