#include "shockfit/c1fn.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "shockfit/errors.hpp"

namespace shockfit {

C1Fn constant_fn(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

C1Fn add(C1Fn f, C1Fn g) {
  auto fv = f.value, gv = g.value, fs = f.slope, gs = g.slope;
  return {[fv, gv](double x) { return fv(x) + gv(x); },
          [fs, gs](double x) { return fs(x) + gs(x); }};
}

C1Fn offset(C1Fn f, double c) {
  auto fv = f.value;
  return {[fv, c](double x) { return fv(x) + c; }, f.slope};
}

C1Fn sech_bump(double amplitude, double width, double center) {
  return {[=](double x) { return amplitude / std::cosh((x - center) / width); },
          [=](double x) {
            const double s = (x - center) / width;
            return -amplitude / width * std::tanh(s) / std::cosh(s);
          }};
}

C1Fn gaussian_bump(double amplitude, double width, double center) {
  return {[=](double x) {
            const double s = (x - center) / width;
            return amplitude * std::exp(-0.5 * s * s);
          },
          [=](double x) {
            const double s = (x - center) / width;
            return -amplitude / width * s * std::exp(-0.5 * s * s);
          }};
}

C1Fn sine_wave(double amplitude, double width, double center) {
  return {[=](double x) { return amplitude * std::sin((x - center) / width); },
          [=](double x) { return amplitude / width * std::cos((x - center) / width); }};
}

namespace {

struct SplineData {
  std::vector<double> xs, ys, ms;

  std::size_t interval(double x) const {
    // largest i with xs[i] <= x, clamped to [0, n-2]
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    if (i == 0) return 0;
    return std::min(i - 1, xs.size() - 2);
  }

  double value(double x) const {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const std::size_t i = interval(x);
    const double h = xs[i + 1] - xs[i];
    const double t = (x - xs[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * ys[i] + h10 * h * ms[i] + h01 * ys[i + 1] + h11 * h * ms[i + 1];
  }

  double slope(double x) const {
    if (x <= xs.front() || x >= xs.back()) return 0.0;
    const std::size_t i = interval(x);
    const double h = xs[i + 1] - xs[i];
    const double t = (x - xs[i]) / h;
    const double t2 = t * t;
    const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
    return d00 * ys[i] + d10 * ms[i] + d01 * ys[i + 1] + d11 * ms[i + 1];
  }
};

}  // namespace

C1Fn hermite_spline(std::vector<double> xs, std::vector<double> ys, std::vector<double> ms) {
  if (xs.size() < 2 || xs.size() != ys.size() || xs.size() != ms.size())
    throw ParamError("hermite_spline: need >= 2 nodes with matching values and slopes");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i] < xs[i + 1])) throw ParamError("hermite_spline: nodes must be increasing");
  ms.front() = 0.0;
  ms.back() = 0.0;
  auto data = std::make_shared<SplineData>(SplineData{std::move(xs), std::move(ys), std::move(ms)});
  return {[data](double x) { return data->value(x); },
          [data](double x) { return data->slope(x); }};
}

C1Fn random_spline(std::mt19937_64& rng, double lo, double hi, int n_nodes, double amplitude) {
  if (n_nodes < 2) throw ParamError("random_spline: need >= 2 nodes");
  std::uniform_real_distribution<double> uy(-amplitude, amplitude);
  std::uniform_real_distribution<double> um(-3.0 * amplitude, 3.0 * amplitude);
  std::vector<double> xs(n_nodes), ys(n_nodes), ms(n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / (n_nodes - 1);
  for (int i = 0; i < n_nodes; ++i) ys[i] = uy(rng);
  for (int i = 0; i < n_nodes; ++i) ms[i] = um(rng) / std::max(1e-8, (hi - lo) / (n_nodes - 1)) * 0.2;
  return hermite_spline(std::move(xs), std::move(ys), std::move(ms));
}

}  // namespace shockfit
