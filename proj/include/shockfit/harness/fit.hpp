#pragma once

#include <utility>
#include <vector>

namespace shockfit::harness {

struct FitResult {
  double rate = 0.0;
  double log_constant = 0.0;
  double residual = 0.0;  // RMS of log deviations
};

/// Least-squares line through (t, log value) on the window. Requires at least
/// eight samples inside the window; nonpositive values raise FitError (callers
/// handle series at the 1e-14 floor separately).
FitResult fit_decay_rate(const std::vector<std::pair<double, double>>& series,
                         std::pair<double, double> window);

}  // namespace shockfit::harness
