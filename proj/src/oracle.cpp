#include "shockfit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shockfit/errors.hpp"

namespace shockfit::oracle {

namespace {

double rk4_source(const model::ScalarLaw& law, double u, double dt) {
  const double k1 = law.g(u);
  const double k2 = law.g(u + 0.5 * dt * k1);
  const double k3 = law.g(u + 0.5 * dt * k2);
  const double k4 = law.g(u + dt * k3);
  return u + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

void source_half_step(const model::ScalarLaw& law, std::vector<double>& cells, double dt_half) {
  if (law.source().is_zero()) return;
  for (double& u : cells) u = rk4_source(law, u, dt_half);
}

double max_wave_speed(const model::ScalarLaw& law, const std::vector<double>& cells) {
  double lo = cells[0], hi = cells[0];
  for (double u : cells) {
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  return poly_max_abs_on(law.flux_prime(), lo, hi);
}

void transport_step(const model::ScalarLaw& law, FvState& s, double dt,
                    std::vector<double>& flux) {
  const int n = s.size();
  // flux[i] is the numerical flux through the left edge of cell i; copy-cell
  // boundaries reduce the edge fluxes to f of the border cells.
  flux[0] = law.f(s.cells[0]);
  flux[n] = law.f(s.cells[n - 1]);
  for (int i = 1; i < n; ++i) flux[i] = godunov_flux(law, s.cells[i - 1], s.cells[i]);
  const double r = dt / s.dx;
  for (int i = 0; i < n; ++i) s.cells[i] -= r * (flux[i + 1] - flux[i]);
}

}  // namespace

double godunov_flux(const model::ScalarLaw& law, double ul, double ur) {
  if (ul == ur) return law.f(ul);
  if (ul < ur) return poly_min_on(law.flux(), ul, ur);
  return poly_max_on(law.flux(), ur, ul);
}

FvState fv_project(const std::function<double(double)>& u0, double x_lo, double x_hi, double dx) {
  if (!(dx > 0.0) || !(x_hi > x_lo)) throw ParamError("fv_project: bad window");
  FvState s;
  s.dx = dx;
  s.x_left = x_lo;
  const int n = std::max(2, static_cast<int>(std::llround((x_hi - x_lo) / dx)));
  s.cells.resize(n);
  for (int i = 0; i < n; ++i) s.cells[i] = u0(s.x_center(i));
  return s;
}

FvState fv_project_anchored(const std::function<double(double)>& u0, double x_lo, double x_hi,
                            double dx, double anchor) {
  if (!(dx > 0.0) || !(x_hi > x_lo)) throw ParamError("fv_project: bad window");
  const double k = std::floor((anchor - x_lo) / dx);
  return fv_project(u0, anchor - (k + 0.5) * dx, x_hi, dx);
}

std::vector<FvState> evolve_fv(const model::ScalarLaw& law, const FvState& init,
                               const std::vector<double>& output_times, double cfl,
                               const std::function<void(const FvState&)>& observer) {
  if (!(cfl > 0.0) || cfl > 0.9) throw ParamError("evolve_fv: cfl must lie in (0, 0.9]");
  if (init.cells.empty()) throw ParamError("evolve_fv: empty initial state");
  for (std::size_t i = 0; i + 1 < output_times.size(); ++i)
    if (!(output_times[i] <= output_times[i + 1]))
      throw ParamError("evolve_fv: output times must be nondecreasing");

  std::vector<FvState> trajectory;
  FvState s = init;
  std::vector<double> flux(s.size() + 1);

  auto emit = [&](const FvState& st) {
    trajectory.push_back(st);
    if (observer) observer(st);
  };

  for (double t_out : output_times) {
    if (t_out < s.t - 1e-12) throw ParamError("evolve_fv: output time before current state");
    while (s.t < t_out - 1e-12) {
      const double speed = max_wave_speed(law, s.cells);
      double dt = speed > 0.0 ? cfl * s.dx / speed : (t_out - s.t);
      dt = std::min(dt, t_out - s.t);
      source_half_step(law, s.cells, 0.5 * dt);
      transport_step(law, s, dt, flux);
      source_half_step(law, s.cells, 0.5 * dt);
      s.t += dt;
      for (int i = 0; i < s.size(); ++i)
        if (!std::isfinite(s.cells[i]))
          throw InstabilityError("evolve_fv: non-finite cell " + std::to_string(i) + " at t=" +
                                 std::to_string(s.t) + " (dt=" + std::to_string(dt) + ")");
    }
    s.t = t_out;
    emit(s);
  }
  return trajectory;
}

double compare_state(const shocktracker::GluedSolution& glued, const FvState& fv,
                     const CompareSpec& spec) {
  const double t = fv.t;
  const auto span_l = glued.left().span_at(t);
  const auto span_r = glued.right().span_at(t);
  const double lo = std::max({fv.x_left, span_l.first, span_r.first});
  const double hi = std::min({fv.x_left + fv.size() * fv.dx, span_l.second, span_r.second});
  if (!(hi > lo)) throw WindowError("compare: no overlap between oracle and glued windows");

  std::vector<double> shock_pos;
  if (glued.main_path().valid_at(t)) shock_pos.push_back(glued.main_path().psi_at(t));
  if (glued.secondary_path() && (!glued.merge() || t < glued.merge()->t_star))
    shock_pos.push_back(glued.secondary_path()->psi_at(t));

  double acc = 0.0;
  for (int i = 0; i < fv.size(); ++i) {
    const double xc = fv.x_center(i);
    if (xc < lo || xc > hi) continue;
    if (spec.norm == CompareSpec::Norm::linf_away_from_shock) {
      bool near = false;
      for (double p : shock_pos) near = near || std::abs(xc - p) <= spec.radius;
      if (near) continue;
    }
    const double diff = std::abs(glued.eval(t, xc).u() - fv.cells[i]);
    if (spec.norm == CompareSpec::Norm::l1)
      acc += fv.dx * diff;
    else
      acc = std::max(acc, diff);
  }
  return acc;
}

double compare(const shocktracker::GluedSolution& glued, const std::vector<FvState>& trajectory,
               double t, const CompareSpec& spec) {
  for (const FvState& s : trajectory)
    if (std::abs(s.t - t) <= 1e-9) return compare_state(glued, s, spec);
  throw WindowError("compare: no oracle state at t=" + std::to_string(t));
}

double discrete_tv(const FvState& s) {
  double tv = 0.0;
  for (int i = 0; i + 1 < s.size(); ++i) tv += std::abs(s.cells[i + 1] - s.cells[i]);
  return tv;
}

double total_mass(const FvState& s) {
  double m = 0.0;
  for (double u : s.cells) m += u;
  return m * s.dx;
}

std::optional<ShockLoci> shock_loci(const FvState& s, double min_jump) {
  const int n = s.size();
  if (n < 4) return std::nullopt;
  int deepest = -1;
  double dmin = -min_jump;
  for (int i = 0; i + 1 < n; ++i) {
    const double d = s.cells[i + 1] - s.cells[i];
    if (d < dmin) {
      dmin = d;
      deepest = i;
    }
  }
  if (deepest < 0) return std::nullopt;
  ShockLoci out;
  out.primary = s.x_left + (deepest + 1) * s.dx;
  int second = -1;
  double dmin2 = -min_jump;
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(i - deepest) <= 2) continue;
    const double d = s.cells[i + 1] - s.cells[i];
    if (d < dmin2) {
      dmin2 = d;
      second = i;
    }
  }
  if (second >= 0) out.secondary = s.x_left + (second + 1) * s.dx;
  return out;
}

std::optional<double> fv_merge_time(const model::ScalarLaw& law, const FvState& init,
                                    double t_max, double cfl, double min_jump) {
  if (!(cfl > 0.0) || cfl > 0.9) throw ParamError("fv_merge_time: cfl must lie in (0, 0.9]");
  FvState s = init;
  std::vector<double> flux(s.size() + 1);
  const auto initial = shock_loci(s, min_jump);
  if (!initial || !initial->secondary)
    throw ParamError("fv_merge_time: initial data does not carry two descent loci");
  while (s.t < t_max) {
    const double speed = max_wave_speed(law, s.cells);
    if (!(speed > 0.0)) throw ParamError("fv_merge_time: stationary field, no merge possible");
    const double dt = std::min(cfl * s.dx / speed, t_max - s.t);
    source_half_step(law, s.cells, 0.5 * dt);
    transport_step(law, s, dt, flux);
    source_half_step(law, s.cells, 0.5 * dt);
    s.t += dt;
    const auto loci = shock_loci(s, min_jump);
    if (!loci) throw InstabilityError("fv_merge_time: lost track of the primary locus");
    if (!loci->secondary) return s.t;
  }
  return std::nullopt;
}

}  // namespace shockfit::oracle
