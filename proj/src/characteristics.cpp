#include "shockfit/characteristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "shockfit/errors.hpp"

namespace shockfit::characteristics {

namespace {

struct Deriv {
  double dx, du, dw;
};

inline Deriv rhs(const model::ScalarLaw& law, const CharacteristicState& s) {
  return {law.fp(s.u), law.g(s.u), law.gp(s.u) * s.w - law.fpp(s.u) * s.w * s.w};
}

inline CharacteristicState axpy(const CharacteristicState& s, const Deriv& d, double h) {
  return {s.x + h * d.dx, s.u + h * d.du, s.w + h * d.dw};
}

inline CharacteristicState rk4(const model::ScalarLaw& law, const CharacteristicState& s,
                               double dt) {
  const Deriv k1 = rhs(law, s);
  const Deriv k2 = rhs(law, axpy(s, k1, 0.5 * dt));
  const Deriv k3 = rhs(law, axpy(s, k2, 0.5 * dt));
  const Deriv k4 = rhs(law, axpy(s, k3, dt));
  return {s.x + dt / 6.0 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx),
          s.u + dt / 6.0 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du),
          s.w + dt / 6.0 * (k1.dw + 2 * k2.dw + 2 * k3.dw + k4.dw)};
}

inline bool bad(const CharacteristicState& s) {
  return !std::isfinite(s.x) || !std::isfinite(s.u) || !std::isfinite(s.w) ||
         std::abs(s.w) > kGradientBlowupThreshold;
}

// Hermite cubic for value y with endpoint slopes dy on [0, h], at offset s.
inline double hermite(double y0, double d0, double y1, double d1, double h, double s) {
  const double t = s / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

}  // namespace

StepOutcome advance_characteristic(const model::ScalarLaw& law, const CharacteristicState& state,
                                   double dt) {
  if (!(dt > 0.0)) throw ParamError("advance_characteristic: dt must be positive");
  if (bad(state)) throw ParamError("advance_characteristic: non-finite or blown-up state");
  StepOutcome out;
  out.state = rk4(law, state, dt);
  if (!bad(out.state)) return out;
  // Bisect the fraction of the step at which the threshold is crossed.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60 && (hi - lo) * dt > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bad(rk4(law, state, mid * dt)))
      hi = mid;
    else
      lo = mid;
  }
  out.blown_up = true;
  out.blow_frac = hi;
  out.state = rk4(law, state, lo * dt);
  if (bad(out.state)) out.state = state;
  return out;
}

SmoothSolution evolve_smooth(const model::ScalarLaw& law, const extension::ExtendedData& data,
                             double t_final, int n_curves, std::pair<double, double> x_span,
                             double dt, int store_every) {
  if (n_curves < 16) throw ParamError("evolve_smooth: n_curves >= 16 required");
  if (!(t_final > 0.0) || !(dt > 0.0)) throw ParamError("evolve_smooth: bad time parameters");
  if (!(x_span.second > x_span.first)) throw ParamError("evolve_smooth: empty span");
  if (store_every < 1) store_every = 1;

  SmoothSolution sol(law);
  sol.n_curves_ = n_curves;

  std::vector<CharacteristicState> cur(n_curves);
  for (int i = 0; i < n_curves; ++i) {
    const double x =
        x_span.first + (x_span.second - x_span.first) * static_cast<double>(i) / (n_curves - 1);
    cur[i] = {x, data.fn.value(x), data.fn.slope(x)};
  }

  const int n_steps = std::max(1, static_cast<int>(std::llround(t_final / dt)));
  const double dt_eff = t_final / n_steps;

  auto gap_scan = [&](const std::vector<CharacteristicState>& fan) {
    for (int i = 0; i + 1 < n_curves; ++i)
      sol.max_gap_ = std::max(sol.max_gap_, fan[i + 1].x - fan[i].x);
  };
  auto ordered = [&](const std::vector<CharacteristicState>& fan) {
    for (int i = 0; i + 1 < n_curves; ++i)
      if (!(fan[i].x < fan[i + 1].x)) return false;
    return true;
  };

  sol.times_.push_back(0.0);
  sol.fan_.push_back(cur);
  gap_scan(cur);

  std::vector<CharacteristicState> next(n_curves);
  for (int step = 0; step < n_steps; ++step) {
    const double t = step * dt_eff;
    bool trouble = false;
    double frac = 1.0;
    int bad_curve = -1;
    for (int i = 0; i < n_curves; ++i) {
      const StepOutcome o = advance_characteristic(law, cur[i], dt_eff);
      next[i] = o.state;
      if (o.blown_up && o.blow_frac < frac + 1e-15) {
        trouble = true;
        frac = std::min(frac, o.blow_frac);
        bad_curve = i;
      }
    }
    if (!trouble && !ordered(next)) {
      // Curve crossing without a threshold hit: bisect the crossing time.
      trouble = true;
      double lo = 0.0, hi = 1.0;
      std::vector<CharacteristicState> probe(n_curves);
      for (int it = 0; it < 60 && (hi - lo) * dt_eff > 1e-6; ++it) {
        const double mid = 0.5 * (lo + hi);
        for (int i = 0; i < n_curves; ++i) probe[i] = rk4(law, cur[i], mid * dt_eff);
        if (ordered(probe))
          lo = mid;
        else
          hi = mid;
      }
      frac = hi;
      for (int i = 0; i + 1 < n_curves; ++i)
        if (!(next[i].x < next[i + 1].x)) {
          bad_curve = i;
          break;
        }
    }
    if (trouble) {
      sol.blowup_ = BlowupEvent{t + frac * dt_eff, cur[std::max(0, bad_curve)].x};
      break;
    }
    cur.swap(next);
    if ((step + 1) % store_every == 0 || step + 1 == n_steps) {
      sol.times_.push_back((step + 1) * dt_eff);
      sol.fan_.push_back(cur);
      gap_scan(cur);
    }
  }
  return sol;
}

int SmoothSolution::locate_time(double t) const {
  if (t < times_.front() - 1e-12 || t > times_.back() + 1e-12)
    throw SpanError("SmoothSolution: time " + std::to_string(t) + " outside stored window [" +
                    std::to_string(times_.front()) + ", " + std::to_string(times_.back()) + "]");
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  int i = static_cast<int>(it - times_.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(times_.size()) - 2);
}

CharacteristicState SmoothSolution::state_on_curve(double t, int curve) const {
  if (blowup_ && t > blowup_->t)
    throw BlowupError("SmoothSolution: query at t=" + std::to_string(t) +
                      " past blow-up at t=" + std::to_string(blowup_->t));
  if (times_.size() == 1) return fan_[0][curve];
  const int i = locate_time(t);
  const double h = times_[i + 1] - times_[i];
  const double s = std::clamp(t - times_[i], 0.0, h);
  if (s == 0.0) return fan_[i][curve];
  if (s == h) return fan_[i + 1][curve];
  const CharacteristicState& a = fan_[i][curve];
  const CharacteristicState& b = fan_[i + 1][curve];
  const auto da = [&](const CharacteristicState& c) {
    return std::array<double, 3>{law_.fp(c.u), law_.g(c.u),
                                 law_.gp(c.u) * c.w - law_.fpp(c.u) * c.w * c.w};
  };
  const auto ka = da(a), kb = da(b);
  return {hermite(a.x, ka[0], b.x, kb[0], h, s), hermite(a.u, ka[1], b.u, kb[1], h, s),
          hermite(a.w, ka[2], b.w, kb[2], h, s)};
}

std::pair<double, double> SmoothSolution::span_at(double t) const {
  const CharacteristicState lo = state_on_curve(t, 0);
  const CharacteristicState hi = state_on_curve(t, n_curves_ - 1);
  return {lo.x, hi.x};
}

SmoothSolution::Sample SmoothSolution::sample(double t, double x) const {
  // Positions at fixed t are increasing in the curve index while alive, so a
  // binary search with on-demand dense output brackets x.
  const CharacteristicState first = state_on_curve(t, 0);
  const CharacteristicState last = state_on_curve(t, n_curves_ - 1);
  if (x < first.x || x > last.x)
    throw SpanError("SmoothSolution::sample: x=" + std::to_string(x) + " outside fan span [" +
                    std::to_string(first.x) + ", " + std::to_string(last.x) + "] at t=" +
                    std::to_string(t));
  int lo = 0, hi = n_curves_ - 1;
  CharacteristicState slo = first, shi = last;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    const CharacteristicState smid = state_on_curve(t, mid);
    if (smid.x <= x) {
      lo = mid;
      slo = smid;
    } else {
      hi = mid;
      shi = smid;
    }
  }
  if (x == slo.x) return {slo.u, slo.w};
  if (x == shi.x) return {shi.u, shi.w};
  const double h = shi.x - slo.x;
  const double u = hermite(slo.u, slo.w, shi.u, shi.w, h, x - slo.x);
  const double w = slo.w + (shi.w - slo.w) * (x - slo.x) / h;
  return {u, w};
}

double SmoothSolution::sup_dist_to(double t, double uref, double x_lo, double x_hi) const {
  double sup = 0.0;
  CharacteristicState prev{};
  bool have_prev = false;
  for (int i = 0; i < n_curves_; ++i) {
    const CharacteristicState s = state_on_curve(t, i);
    if (s.x >= x_lo && s.x <= x_hi) {
      sup = std::max(sup, std::abs(s.u - uref));
      if (have_prev) {
        const double h = s.x - prev.x;
        const double um = hermite(prev.u, prev.w, s.u, s.w, h, 0.5 * h);
        sup = std::max(sup, std::abs(um - uref));
      }
      prev = s;
      have_prev = true;
    } else {
      have_prev = false;
    }
  }
  return sup;
}

double SmoothSolution::sup_neg_part_grad(double t, double signf2, double x_lo, double x_hi) const {
  double sup = 0.0;
  double wprev = 0.0;
  bool have_prev = false;
  for (int i = 0; i < n_curves_; ++i) {
    const CharacteristicState s = state_on_curve(t, i);
    if (s.x >= x_lo && s.x <= x_hi) {
      sup = std::max(sup, std::max(0.0, -signf2 * s.w));
      if (have_prev) sup = std::max(sup, std::max(0.0, -signf2 * 0.5 * (wprev + s.w)));
      wprev = s.w;
      have_prev = true;
    } else {
      have_prev = false;
    }
  }
  return sup;
}

std::optional<double> toy_blowup_time(double alpha, double beta, double w0) {
  if (beta < 0.0) throw ParamError("toy_blowup_time: beta must be nonnegative");
  const double q = alpha * w0;
  if (q >= -beta) return std::nullopt;
  if (beta == 0.0) return -1.0 / q;
  return std::log(q / (q + beta)) / beta;
}

}  // namespace shockfit::characteristics
