#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shockfit::harness {

struct CriterionResult {
  std::string id;
  std::string label;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

/// The full verification suite; every tolerance is pinned here. Each entry
/// prints one pass/fail line to `os` as it completes.
std::vector<CriterionResult> run_acceptance(std::ostream& os);

}  // namespace shockfit::harness
