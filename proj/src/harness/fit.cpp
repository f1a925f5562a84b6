#include "shockfit/harness/fit.hpp"

#include <cmath>
#include <string>

#include "shockfit/errors.hpp"

namespace shockfit::harness {

FitResult fit_decay_rate(const std::vector<std::pair<double, double>>& series,
                         std::pair<double, double> window) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, v] : series) {
    if (t < window.first || t > window.second) continue;
    if (!(v > 0.0))
      throw FitError("fit_decay_rate: nonpositive value " + std::to_string(v) + " at t=" +
                     std::to_string(t) + " (floor the series at 1e-14 before fitting)");
    pts.emplace_back(t, std::log(v));
  }
  if (pts.size() < 8)
    throw FitError("fit_decay_rate: only " + std::to_string(pts.size()) +
                   " samples in the fit window, need >= 8");
  double st = 0, sl = 0, stt = 0, stl = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [t, l] : pts) {
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
  }
  const double denom = n * stt - st * st;
  if (denom <= 0.0) throw FitError("fit_decay_rate: degenerate time grid");
  FitResult out;
  out.rate = (n * stl - st * sl) / denom;
  out.log_constant = (sl - out.rate * st) / n;
  double ss = 0.0;
  for (const auto& [t, l] : pts) {
    const double d = l - (out.log_constant + out.rate * t);
    ss += d * d;
  }
  out.residual = std::sqrt(ss / n);
  return out;
}

}  // namespace shockfit::harness
