#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace landscape {

struct CheckOutcome {
  bool pass = false;
  std::string detail;
};

struct InvariantCheck {
  std::string suite;
  std::string name;
  std::function<CheckOutcome(std::uint64_t seed)> run;
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Every module invariant, grouped by suite.
const std::vector<InvariantCheck>& invariant_checks();

// Runs the checks whose suite matches filter (empty: all). Exceptions count as failures.
// When progress is set, one line per check is written as it finishes.
std::vector<CheckResult> run_verify(std::uint64_t seed, const std::string& filter = "",
                                    std::ostream* progress = nullptr);

}  // namespace landscape
