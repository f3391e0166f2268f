#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace functorad::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst deviation seen
  double threshold = 0.0;  // pass iff measured <= threshold
  std::size_t samples = 0;
  std::string note;        // set when the suite threw
};

/// Runs every invariant suite with the given seed. Suites are independent
/// and run concurrently when `parallel` is set; the result order is fixed.
std::vector<CheckResult> run_battery(std::uint64_t seed = 0, bool parallel = true);

/// One line per suite plus a totals line.
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace functorad::checks
