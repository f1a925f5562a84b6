#include "shockfit/shocktracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shockfit/errors.hpp"

namespace shockfit::shocktracker {

namespace {

int locate(const std::vector<double>& times, double t) {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  int i = static_cast<int>(it - times.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(times.size()) - 2);
}

struct PathAccum {
  ShockPath path;

  void push(double t, double psi, double rhs_speed, double ul, double ur, double lax_l,
            double lax_r) {
    path.times.push_back(t);
    path.psi.push_back(psi);
    path.psi_prime.push_back(rhs_speed);
    path.u_left.push_back(ul);
    path.u_right.push_back(ur);
    path.lax_left.push_back(lax_l);
    path.lax_right.push_back(lax_r);
  }
};

struct RhsEval {
  double speed, ul, ur;
};

RhsEval rh_speed(const model::ScalarLaw& law, const SmoothSolution& left,
                 const SmoothSolution& right, double t, double psi) {
  const double ul = left.sample(t, psi).u;
  const double ur = right.sample(t, psi).u;
  return {model::slope(law, ul, ur), ul, ur};
}

double rk4_psi(const model::ScalarLaw& law, const SmoothSolution& left,
               const SmoothSolution& right, double t, double psi, double dt) {
  const double k1 = rh_speed(law, left, right, t, psi).speed;
  const double k2 = rh_speed(law, left, right, t + 0.5 * dt, psi + 0.5 * dt * k1).speed;
  const double k3 = rh_speed(law, left, right, t + 0.5 * dt, psi + 0.5 * dt * k2).speed;
  const double k4 = rh_speed(law, left, right, t + dt, psi + dt * k3).speed;
  return psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

void require_alive(const SmoothSolution& sol, double t_final, const char* which) {
  if (!sol.alive() && sol.blowup()->t < t_final)
    throw BlowupError(std::string("track_shock: ") + which + " solution blew up at t=" +
                      std::to_string(sol.blowup()->t) + " before t_final");
  if (sol.t_final() + 1e-12 < t_final)
    throw ParamError(std::string("track_shock: ") + which + " solution ends at t=" +
                     std::to_string(sol.t_final()) + " before requested t_final");
}

// Least-squares slope of log(y) over t; used only for the decay sanity check.
double log_slope(const std::vector<double>& t, const std::vector<double>& y) {
  double st = 0, sl = 0, stt = 0, stl = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (y[i] <= 1e-14) continue;
    const double l = std::log(y[i]);
    st += t[i];
    sl += l;
    stt += t[i] * t[i];
    stl += t[i] * l;
    ++n;
  }
  if (n < 8) throw FitError("asymptotic_phase: too few decaying samples");
  const double denom = n * stt - st * st;
  if (denom == 0.0) throw FitError("asymptotic_phase: degenerate time grid");
  return (n * stl - st * sl) / denom;
}

}  // namespace

double ShockPath::psi_at(double t) const {
  if (times.empty()) throw ValidityError("ShockPath: empty path");
  if (!valid_at(t))
    throw ValidityError("ShockPath: query at t=" + std::to_string(t) + " beyond valid_until=" +
                        std::to_string(*valid_until));
  if (t <= times.front()) return psi.front();
  if (t >= times.back()) return psi.back();
  const int i = locate(times, t);
  const double h = times[i + 1] - times[i];
  const double s = (t - times[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * psi[i] + (s3 - 2 * s2 + s) * h * psi_prime[i] +
         (-2 * s3 + 3 * s2) * psi[i + 1] + (s3 - s2) * h * psi_prime[i + 1];
}

double ShockPath::psi_prime_at(double t) const {
  if (times.empty()) throw ValidityError("ShockPath: empty path");
  if (!valid_at(t))
    throw ValidityError("ShockPath: query beyond valid_until");
  if (t <= times.front()) return psi_prime.front();
  if (t >= times.back()) return psi_prime.back();
  const int i = locate(times, t);
  const double s = (t - times[i]) / (times[i + 1] - times[i]);
  return (1 - s) * psi_prime[i] + s * psi_prime[i + 1];
}

double ShockPath::min_lax_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i) m = std::min(m, std::min(lax_left[i], lax_right[i]));
  return m;
}

ShockPath track_shock(const model::ScalarLaw& law, const SmoothSolution& left,
                      const SmoothSolution& right, double psi0, double t_final, double dt) {
  if (!(dt > 0.0) || !(t_final > 0.0)) throw ParamError("track_shock: bad time parameters");
  require_alive(left, t_final, "left");
  require_alive(right, t_final, "right");

  const int n_steps = std::max(1, static_cast<int>(std::llround(t_final / dt)));
  const double h = t_final / n_steps;

  PathAccum acc;
  double psi = psi0;
  for (int k = 0; k <= n_steps; ++k) {
    const double t = k * h;
    const RhsEval e = rh_speed(law, left, right, t, psi);
    const double lax_l = law.fp(e.ul) - e.speed;
    const double lax_r = e.speed - law.fp(e.ur);
    acc.push(t, psi, e.speed, e.ul, e.ur, lax_l, lax_r);
    if (lax_l <= 0.0 || lax_r <= 0.0) {
      acc.path.valid_until = t;
      break;
    }
    if (k < n_steps) psi = rk4_psi(law, left, right, t, psi, h);
  }
  return acc.path;
}

GluedSolution::GluedSolution(std::shared_ptr<const SmoothSolution> left,
                             std::shared_ptr<const SmoothSolution> right, ShockPath path)
    : left_(std::move(left)), right_(std::move(right)), main_(std::move(path)) {}

GluedSolution::GluedSolution(std::shared_ptr<const SmoothSolution> left,
                             std::shared_ptr<const SmoothSolution> middle,
                             std::shared_ptr<const SmoothSolution> right, ShockPath main,
                             ShockPath secondary, std::optional<MergeEvent> merge)
    : left_(std::move(left)),
      middle_(std::move(middle)),
      right_(std::move(right)),
      main_(std::move(main)),
      secondary_(std::move(secondary)),
      merge_(std::move(merge)) {}

GluedSolution::Value GluedSolution::eval(double t, double x) const {
  if (!main_.valid_at(t))
    throw ValidityError("GluedSolution: query at t=" + std::to_string(t) +
                        " beyond the path's valid window");
  const double p = main_.psi_at(t);
  const bool before_merge = middle_ && (!merge_ || t < merge_->t_star);
  Value v;
  if (before_merge) {
    const double ps = secondary_->psi_at(t);
    if (x < ps) {
      v.u_left = v.u_right = left_->sample(t, x).u;
    } else if (x == ps) {
      v.at_shock = true;
      v.u_left = left_->sample(t, x).u;
      v.u_right = middle_->sample(t, x).u;
    } else if (x < p) {
      v.u_left = v.u_right = middle_->sample(t, x).u;
    } else if (x == p) {
      v.at_shock = true;
      v.u_left = middle_->sample(t, x).u;
      v.u_right = right_->sample(t, x).u;
    } else {
      v.u_left = v.u_right = right_->sample(t, x).u;
    }
    return v;
  }
  if (x < p) {
    v.u_left = v.u_right = left_->sample(t, x).u;
  } else if (x > p) {
    v.u_left = v.u_right = right_->sample(t, x).u;
  } else {
    v.at_shock = true;
    v.u_left = left_->sample(t, x).u;
    v.u_right = right_->sample(t, x).u;
  }
  return v;
}

GluedSolution glue(std::shared_ptr<const SmoothSolution> left,
                   std::shared_ptr<const SmoothSolution> right, ShockPath path) {
  return GluedSolution(std::move(left), std::move(right), std::move(path));
}

PhaseResult asymptotic_phase(const ShockPath& path, double sigma, double rate_hint) {
  if (!(rate_hint < 0.0)) throw ParamError("asymptotic_phase: rate_hint must be negative");
  if (path.size() < 2) throw ParamError("asymptotic_phase: path too short");
  if (path.valid_until && *path.valid_until < path.t_final())
    throw ValidityError("asymptotic_phase: path truncated before its final time");

  PhaseResult out;
  out.truncation_time = path.t_final();

  double max_dev = 0.0;
  for (double s : path.psi_prime) max_dev = std::max(max_dev, std::abs(s - sigma));
  if (max_dev <= 1e-13) {
    out.psi_infty = path.psi.front();
    out.tail_bound = 0.0;
    return out;
  }

  // Decay sanity check on the middle half of the record.
  const double T = path.t_final();
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path.times[i] < 0.25 * T || path.times[i] > 0.75 * T) continue;
    ts.push_back(path.times[i]);
    ys.push_back(std::abs(path.psi_prime[i] - sigma));
  }
  if (log_slope(ts, ys) >= -1e-6)
    throw FitError("asymptotic_phase: |psi' - sigma| is not decaying");

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double dt = path.times[i + 1] - path.times[i];
    integral += 0.5 * dt * ((path.psi_prime[i] - sigma) + (path.psi_prime[i + 1] - sigma));
  }
  out.psi_infty = path.psi.front() + integral;
  out.tail_bound = std::abs(path.psi_prime.back() - sigma) / std::abs(rate_hint);
  return out;
}

GluedSolution two_shock_evolution(const model::ScalarLaw& law,
                                  std::shared_ptr<const SmoothSolution> left,
                                  std::shared_ptr<const SmoothSolution> middle,
                                  std::shared_ptr<const SmoothSolution> right, double psi_s0,
                                  double psi0, double t_final, double dt) {
  if (!(psi_s0 < psi0)) throw ParamError("two_shock_evolution: psi_s0 must lie left of psi0");
  if (!(dt > 0.0) || !(t_final > 0.0)) throw ParamError("two_shock_evolution: bad time parameters");
  require_alive(*left, t_final, "left");
  require_alive(*middle, t_final, "middle");
  require_alive(*right, t_final, "right");

  const int n_steps = std::max(1, static_cast<int>(std::llround(t_final / dt)));
  const double h = t_final / n_steps;

  PathAccum sec, main;
  double pl = psi_s0, pr = psi0;
  std::optional<MergeEvent> merge;

  // Records a node; reports false (and truncates) when a Lax margin crosses zero.
  auto record = [&](PathAccum& acc, const SmoothSolution& a, const SmoothSolution& b, double t,
                    double psi) {
    const RhsEval e = rh_speed(law, a, b, t, psi);
    const double lax_l = law.fp(e.ul) - e.speed;
    const double lax_r = e.speed - law.fp(e.ur);
    acc.push(t, psi, e.speed, e.ul, e.ur, lax_l, lax_r);
    if (lax_l <= 0.0 || lax_r <= 0.0) {
      acc.path.valid_until = t;
      return false;
    }
    return true;
  };

  int k = 0;
  bool truncated = false;
  for (; k <= n_steps; ++k) {
    const double t = k * h;
    const bool ok_sec = record(sec, *left, *middle, t, pl);
    const bool ok_main = record(main, *middle, *right, t, pr);
    if (!ok_sec || !ok_main) {
      truncated = true;
      break;
    }
    if (k == n_steps) break;
    const double pl_next = rk4_psi(law, *left, *middle, t, pl, h);
    const double pr_next = rk4_psi(law, *middle, *right, t, pr, h);
    if (pr_next - pl_next <= 0.0) {
      // Crossing inside this step: bisect to dt * 1e-3 on the earliest bracket.
      double lo = 0.0, hi = 1.0;
      while ((hi - lo) * h > dt * 1e-3) {
        const double mid = 0.5 * (lo + hi);
        const double a = rk4_psi(law, *left, *middle, t, pl, mid * h);
        const double b = rk4_psi(law, *middle, *right, t, pr, mid * h);
        if (b - a <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      const double t_star = t + hi * h;
      const double x_star = rk4_psi(law, *middle, *right, t, pr, hi * h);
      const double pl_star = rk4_psi(law, *left, *middle, t, pl, hi * h);
      record(sec, *left, *middle, t_star, pl_star);
      merge = MergeEvent{t_star, x_star};
      break;
    }
    pl = pl_next;
    pr = pr_next;
  }

  if (!merge || truncated) {
    // No crossing before t_final (or a truncated path): merge absent.
    return GluedSolution(std::move(left), std::move(middle), std::move(right),
                         std::move(main.path), std::move(sec.path), std::nullopt);
  }

  // Continue the surviving path from (t*, psi_r(t*)) with the left/right jump.
  double psi = merge->x_star;
  double t = merge->t_star;
  bool ok = record(main, *left, *right, t, psi);
  while (ok && t < t_final - 1e-12) {
    const double step = std::min(h, t_final - t);
    psi = rk4_psi(law, *left, *right, t, psi, step);
    t += step;
    ok = record(main, *left, *right, t, psi);
  }
  return GluedSolution(std::move(left), std::move(middle), std::move(right), std::move(main.path),
                       std::move(sec.path), merge);
}

}  // namespace shockfit::shocktracker
