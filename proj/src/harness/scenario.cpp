#include "shockfit/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "shockfit/characteristics.hpp"
#include "shockfit/errors.hpp"
#include "shockfit/oracle.hpp"
#include "shockfit/shocktracker.hpp"
#include "shockfit/spectral.hpp"

namespace shockfit::harness {

namespace chars = shockfit::characteristics;
namespace ext = shockfit::extension;
namespace track = shockfit::shocktracker;

namespace {

constexpr double kSeriesFloor = 1e-14;

Polynomial build_flux(const LawSpec& spec) {
  if (spec.flux_family == "burgers") return model::burgers_flux();
  if (spec.flux_family == "cubic") return model::cubic_flux();
  return Polynomial(spec.flux_coeffs);
}

Polynomial build_source(const std::string& family, const std::vector<double>& coeffs) {
  if (family == "bistable") return model::bistable_source();
  if (family == "zero") return model::zero_source();
  if (family == "linear") return model::linear_source(coeffs.at(0));
  return Polynomial(coeffs);
}

double shape_extent(const PerturbationSpec& spec) {
  switch (spec.shape) {
    case PerturbationSpec::Shape::none: return 0.0;
    case PerturbationSpec::Shape::sech: return 30.0 * spec.width;
    case PerturbationSpec::Shape::gaussian: return 12.0 * spec.width;
    case PerturbationSpec::Shape::sine: return 40.0 * spec.width;
    case PerturbationSpec::Shape::spline: return spec.width + 1.0;
  }
  return 0.0;
}

FitOutcome fit_or_floor(const std::vector<std::pair<double, double>>& series,
                        std::pair<double, double> window) {
  FitOutcome out;
  out.window_lo = window.first;
  out.window_hi = window.second;
  double vmax = 0.0;
  for (const auto& [t, v] : series) vmax = std::max(vmax, v);
  if (vmax <= 10 * kSeriesFloor) {
    out.at_floor = true;
    return out;
  }
  std::vector<std::pair<double, double>> floored = series;
  for (auto& [t, v] : floored) v = std::max(v, kSeriesFloor);
  out.fit = fit_decay_rate(floored, window);
  return out;
}

struct CheckEval {
  DecayReport* report;

  void band(const CheckSpec& spec, const std::optional<FitOutcome>& fit) {
    CheckResult r{spec.key, false, 0.0, ""};
    if (spec.params.size() != 2) throw ConfigError("config: '" + spec.key + "' expects 'lo hi'");
    if (!fit) {
      r.detail = "unavailable";
    } else if (fit->at_floor) {
      r.pass = true;
      r.detail = "series at floor";
    } else {
      const double rate = fit->fit.rate;
      r.margin = std::min(rate - spec.params[0], spec.params[1] - rate);
      r.pass = r.margin >= 0.0;
      r.detail = "rate=" + format_double(rate);
    }
    report->checks.push_back(std::move(r));
  }

  void upper_bound(const CheckSpec& spec, const std::optional<double>& value,
                   const char* value_name) {
    CheckResult r{spec.key, false, 0.0, ""};
    if (spec.params.size() != 1)
      throw ConfigError("config: '" + spec.key + "' expects one threshold");
    if (!value) {
      r.detail = "unavailable";
    } else {
      r.margin = spec.params[0] - *value;
      r.pass = r.margin >= 0.0;
      r.detail = std::string(value_name) + "=" + format_double(*value);
    }
    report->checks.push_back(std::move(r));
  }

  void lower_bound(const CheckSpec& spec, const std::optional<double>& value,
                   const char* value_name) {
    CheckResult r{spec.key, false, 0.0, ""};
    if (spec.params.size() != 1)
      throw ConfigError("config: '" + spec.key + "' expects one threshold");
    if (!value) {
      r.detail = "unavailable";
    } else {
      r.margin = *value - spec.params[0];
      r.pass = r.margin >= 0.0;
      r.detail = std::string(value_name) + "=" + format_double(*value);
    }
    report->checks.push_back(std::move(r));
  }

  void rate_upper(const CheckSpec& spec, const std::optional<FitOutcome>& fit) {
    CheckResult r{spec.key, false, 0.0, ""};
    if (spec.params.size() != 1)
      throw ConfigError("config: '" + spec.key + "' expects one threshold");
    if (!fit) {
      r.detail = "unavailable";
    } else if (fit->at_floor) {
      r.pass = true;
      r.detail = "series at floor";
    } else {
      r.margin = spec.params[0] - fit->fit.rate;
      r.pass = r.margin >= 0.0;
      r.detail = "rate=" + format_double(fit->fit.rate);
    }
    report->checks.push_back(std::move(r));
  }

  void target(const CheckSpec& spec, const std::optional<double>& value,
              const char* value_name) {
    CheckResult r{spec.key, false, 0.0, ""};
    if (spec.params.size() != 2)
      throw ConfigError("config: '" + spec.key + "' expects 'value tolerance'");
    if (!value) {
      r.detail = "unavailable";
    } else {
      r.margin = spec.params[1] - std::abs(*value - spec.params[0]);
      r.pass = r.margin >= 0.0;
      r.detail = std::string(value_name) + "=" + format_double(*value);
    }
    report->checks.push_back(std::move(r));
  }
};

struct FanSetup {
  ext::ExtendedData data;  // whole-line u data
  double delta = 0.0;
};

FanSetup make_side_fan(ext::Side side, double boundary, const C1Fn& perturbation, double extent,
                       double endstate, double amplification) {
  FanSetup out;
  if (extent <= 0.0) {
    out.data = ext::whole_line(constant_fn(endstate));
    return out;
  }
  const auto half = ext::HalfLineData::sampled(side, boundary, perturbation, extent, 40001);
  ext::ExtendedData v = ext::extend_half_line(half, amplification);
  out.delta = std::max(v.delta_lower, v.delta_upper);
  out.data = ext::whole_line(offset(v.fn, endstate));
  return out;
}

std::vector<std::pair<double, double>> column_series(const std::vector<SeriesRow>& rows,
                                                     std::optional<double> SeriesRow::*field) {
  std::vector<std::pair<double, double>> out;
  for (const SeriesRow& r : rows)
    if (r.*field) out.emplace_back(r.t, *(r.*field));
  return out;
}

double interp_at(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
  if (t <= ts.front()) return vs.front();
  if (t >= ts.back()) return vs.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
  const double s = (t - ts[i]) / (ts[i + 1] - ts[i]);
  return (1 - s) * vs[i] + s * vs[i + 1];
}

void capture_fan_snapshots(DecayReport* report, const chars::SmoothSolution& sol,
                           const std::string& piece) {
  const auto& times = sol.times();
  const std::size_t stride = std::max<std::size_t>(1, times.size() / 4);
  for (std::size_t ti = 0; ti < times.size(); ti += stride) {
    for (int c = 0; c < sol.curve_count(); ++c) {
      const auto& s = sol.node(static_cast<int>(ti), c);
      report->snapshots.push_back({piece, times[ti], s.x, s.u, s.w});
    }
  }
}

void run_constant_state(const ScenarioConfig& cfg, DecayReport* report);
void run_riemann_shock(const ScenarioConfig& cfg, DecayReport* report);
void run_two_shock(const ScenarioConfig& cfg, DecayReport* report);
void run_toy(const ScenarioConfig& cfg, DecayReport* report);
void run_resolvent_check(const ScenarioConfig& cfg, DecayReport* report);
void run_spectrum_scan(const ScenarioConfig& cfg, DecayReport* report);

}  // namespace

model::ScalarLaw build_law(const LawSpec& spec,
                           const std::optional<SourceOverride>& source_override) {
  Polynomial flux = build_flux(spec);
  Polynomial source = source_override
                          ? build_source(source_override->family, source_override->coeffs)
                          : build_source(spec.source_family, spec.source_coeffs);
  std::string desc = spec.flux_family + "/" +
                     (source_override ? source_override->family : spec.source_family);
  return model::ScalarLaw(std::move(flux), std::move(source), std::move(desc));
}

C1Fn build_perturbation(const PerturbationSpec& spec, std::mt19937_64& rng) {
  switch (spec.shape) {
    case PerturbationSpec::Shape::none: return constant_fn(0.0);
    case PerturbationSpec::Shape::sech: return sech_bump(spec.amplitude, spec.width, spec.center);
    case PerturbationSpec::Shape::gaussian:
      return gaussian_bump(spec.amplitude, spec.width, spec.center);
    case PerturbationSpec::Shape::sine: return sine_wave(spec.amplitude, spec.width, spec.center);
    case PerturbationSpec::Shape::spline:
      return random_spline(rng, spec.center - spec.width, spec.center + spec.width, 9,
                           spec.amplitude);
  }
  return constant_fn(0.0);
}

namespace {

void run_constant_state(const ScenarioConfig& cfg, DecayReport* report) {
  const model::ScalarLaw law = build_law(cfg.law);
  std::mt19937_64 rng(cfg.seed);
  const C1Fn pert = build_perturbation(cfg.perturb, rng);
  const double extent = shape_extent(cfg.perturb);

  const double amp = cfg.perturb.amplitude;
  const double maxfp =
      poly_max_abs_on(law.flux_prime(), cfg.u_bar - amp - 0.1, cfg.u_bar + amp + 0.1);
  std::pair<double, double> span;
  if (cfg.span_override) {
    span = *cfg.span_override;
  } else {
    const double half = std::abs(cfg.perturb.center) + std::max(extent, 1.0) +
                        cfg.t_final * maxfp + 2.0;
    span = {-half, half};
  }

  const auto eq = model::check_equilibrium(law, cfg.u_bar, 1e-10);
  report->extra.emplace_back("equilibrium_g_value", format_double(eq.g_value));
  report->extra.emplace_back("equilibrium_g_prime", format_double(eq.g_prime));
  report->extra.emplace_back("equilibrium_stable", eq.stable ? "true" : "false");

  const auto data = ext::whole_line(offset(pert, cfg.u_bar));
  chars::SmoothSolution sol = chars::evolve_smooth(law, data, cfg.t_final, cfg.n_curves, span,
                                                   cfg.dt, cfg.store_every);
  report->fan_max_gap = sol.max_gap();
  capture_fan_snapshots(report, sol, "fan");
  if (!sol.alive()) {
    report->status = "blowup";
    report->blowup_t = sol.blowup()->t;
    report->blowup_x = sol.blowup()->x;
  }

  const double signf2 = law.fpp(cfg.u_bar) >= 0.0 ? 1.0 : -1.0;
  for (double t : sol.times()) {
    SeriesRow row;
    row.t = t;
    row.sup_err_left = sol.sup_dist_to(t, cfg.u_bar, span.first, span.second);
    row.negpart_grad_left = sol.sup_neg_part_grad(t, signf2, span.first, span.second);
    report->series.push_back(row);
  }

  // Finite-volume cross-check of the fan (L1 between sampled fan and cells).
  if (cfg.oracle_enabled && sol.alive()) {
    const oracle::FvState init = oracle::fv_project(
        [&](double x) { return data.fn.value(x); }, span.first, span.second, cfg.oracle_dx);
    std::size_t row_i = 0;
    oracle::evolve_fv(law, init, sol.times(), cfg.oracle_cfl, [&](const oracle::FvState& st) {
      double l1 = 0.0;
      for (int i = 0; i < st.size(); ++i) {
        const double xc = st.x_center(i);
        const auto sp = sol.span_at(st.t);
        if (xc < sp.first || xc > sp.second) continue;
        l1 += st.dx * std::abs(sol.sample(st.t, xc).u - st.cells[i]);
      }
      report->series[row_i++].oracle_l1 = l1;
    });
    report->oracle_l1_final = report->series.back().oracle_l1;
  }

  if (sol.alive()) {
    const auto window = cfg.effective_fit_window();
    report->rate_sup_left = fit_or_floor(column_series(report->series, &SeriesRow::sup_err_left),
                                         window);
    report->rate_grad_left =
        fit_or_floor(column_series(report->series, &SeriesRow::negpart_grad_left), window);
  }

  CheckEval eval{report};
  for (const CheckSpec& c : cfg.checks) {
    if (c.key == "check.rate_sup_left") eval.band(c, report->rate_sup_left);
    else if (c.key == "check.rate_grad_left") eval.band(c, report->rate_grad_left);
    else if (c.key == "check.oracle_l1_max") eval.upper_bound(c, report->oracle_l1_final, "l1");
  }
}

struct ShockPieces {
  model::ScalarLaw law_base;
  std::shared_ptr<const chars::SmoothSolution> left, right;
  std::pair<double, double> span;
  C1Fn pert_left, pert_right;
};

ShockPieces build_shock_fans(const ScenarioConfig& cfg) {
  ShockPieces p{build_law(cfg.law), nullptr, nullptr, {0, 0}, {}, {}};
  const model::ScalarLaw law_left = build_law(cfg.law, cfg.source_left);
  const model::ScalarLaw law_right = build_law(cfg.law, cfg.source_right);

  std::mt19937_64 rng(cfg.seed);
  p.pert_left = build_perturbation(cfg.perturb_left, rng);
  p.pert_right = build_perturbation(cfg.perturb_right, rng);

  const double extL = shape_extent(cfg.perturb_left) +
                      std::abs(cfg.perturb_left.center - cfg.psi0) + 1.0;
  const double extR = shape_extent(cfg.perturb_right) +
                      std::abs(cfg.perturb_right.center - cfg.psi0) + 1.0;

  FanSetup fanL = make_side_fan(ext::Side::left, cfg.psi0, p.pert_left,
                                cfg.perturb_left.shape == PerturbationSpec::Shape::none ? 0 : extL,
                                cfg.u_minus, cfg.amplification);
  FanSetup fanR = make_side_fan(ext::Side::right, cfg.psi0, p.pert_right,
                                cfg.perturb_right.shape == PerturbationSpec::Shape::none ? 0 : extR,
                                cfg.u_plus, cfg.amplification);

  const double amp_bound =
      cfg.amplification * std::max(cfg.perturb_left.amplitude, cfg.perturb_right.amplitude) + 0.1;
  const double u_lo = std::min(cfg.u_minus, cfg.u_plus) - amp_bound;
  const double u_hi = std::max(cfg.u_minus, cfg.u_plus) + amp_bound;
  const double maxfp = poly_max_abs_on(p.law_base.flux_prime(), u_lo, u_hi);
  if (cfg.span_override) {
    p.span = *cfg.span_override;
  } else {
    const double half = std::max(extL, extR) + cfg.t_final * maxfp +
                        4.0 * std::max(fanL.delta, fanR.delta) + 2.0;
    p.span = {cfg.psi0 - half, cfg.psi0 + half};
  }

  p.left = std::make_shared<chars::SmoothSolution>(chars::evolve_smooth(
      law_left, fanL.data, cfg.t_final, cfg.n_curves, p.span, cfg.dt, cfg.store_every));
  p.right = std::make_shared<chars::SmoothSolution>(chars::evolve_smooth(
      law_right, fanR.data, cfg.t_final, cfg.n_curves, p.span, cfg.dt, cfg.store_every));
  return p;
}

void run_riemann_shock(const ScenarioConfig& cfg, DecayReport* report) {
  ShockPieces p = build_shock_fans(cfg);
  const model::ScalarLaw law_left = build_law(cfg.law, cfg.source_left);
  const model::ScalarLaw law_right = build_law(cfg.law, cfg.source_right);
  const auto shock =
      model::RiemannShockSpec::from_endstates(p.law_base, cfg.u_minus, cfg.u_plus, cfg.psi0);

  report->extra.emplace_back("sigma", format_double(shock.sigma));
  const auto oleinik = model::check_oleinik(p.law_base, shock);
  report->extra.emplace_back("oleinik_ok", oleinik.ok ? "true" : "false");
  report->extra.emplace_back("oleinik_margin", format_double(oleinik.margin));
  const auto eqm = model::check_equilibrium(law_left, cfg.u_minus, 1e-10);
  const auto eqp = model::check_equilibrium(law_right, cfg.u_plus, 1e-10);
  report->extra.emplace_back("endstate_stable_minus", eqm.stable ? "true" : "false");
  report->extra.emplace_back("endstate_stable_plus", eqp.stable ? "true" : "false");

  report->fan_max_gap = std::max(p.left->max_gap(), p.right->max_gap());
  capture_fan_snapshots(report, *p.left, "left");
  capture_fan_snapshots(report, *p.right, "right");

  if (!p.left->alive() || !p.right->alive()) {
    report->status = "blowup";
    const auto& ev = !p.left->alive() ? p.left->blowup() : p.right->blowup();
    report->blowup_t = ev->t;
    report->blowup_x = ev->x;
    for (const CheckSpec& c : cfg.checks)
      report->checks.push_back({c.key, false, 0.0, "fan blow-up"});
    return;
  }

  track::ShockPath path =
      track::track_shock(p.law_base, *p.left, *p.right, cfg.psi0, cfg.t_final, cfg.dt);
  if (path.valid_until) {
    report->status = "truncated";
    report->extra.emplace_back("path_valid_until", format_double(*path.valid_until));
  }
  report->lax_margin_min = path.min_lax_margin();

  const double rate_hint =
      std::min(std::max(law_left.gp(cfg.u_minus), law_right.gp(cfg.u_plus)), -1e-3);
  std::optional<track::PhaseResult> phase;
  if (!path.valid_until) {
    try {
      phase = track::asymptotic_phase(path, shock.sigma, rate_hint);
      report->psi_infty = phase->psi_infty;
      report->tail_bound = phase->tail_bound;
    } catch (const FitError& e) {
      report->extra.emplace_back("phase_fit_error", e.what());
    }
  }

  const double signf2_l = p.law_base.fpp(cfg.u_minus) >= 0.0 ? 1.0 : -1.0;
  const double signf2_r = p.law_base.fpp(cfg.u_plus) >= 0.0 ? 1.0 : -1.0;
  for (double t : p.left->times()) {
    SeriesRow row;
    row.t = t;
    if (path.valid_at(t) && t <= path.t_final()) {
      const double psi_t = path.psi_at(t);
      row.psi = psi_t;
      row.psi_prime = path.psi_prime_at(t);
      row.lax_margin_left = interp_at(path.times, path.lax_left, t);
      row.lax_margin_right = interp_at(path.times, path.lax_right, t);
      row.sup_err_left = p.left->sup_dist_to(t, cfg.u_minus, p.span.first, psi_t);
      row.sup_err_right = p.right->sup_dist_to(t, cfg.u_plus, psi_t, p.span.second);
      row.negpart_grad_left = p.left->sup_neg_part_grad(t, signf2_l, p.span.first, psi_t);
      row.negpart_grad_right = p.right->sup_neg_part_grad(t, signf2_r, psi_t, p.span.second);
    }
    report->series.push_back(row);
  }

  const auto window = cfg.effective_fit_window();
  report->rate_sup_left =
      fit_or_floor(column_series(report->series, &SeriesRow::sup_err_left), window);
  report->rate_sup_right =
      fit_or_floor(column_series(report->series, &SeriesRow::sup_err_right), window);
  report->rate_grad_left =
      fit_or_floor(column_series(report->series, &SeriesRow::negpart_grad_left), window);
  report->rate_grad_right =
      fit_or_floor(column_series(report->series, &SeriesRow::negpart_grad_right), window);
  if (phase) {
    std::vector<std::pair<double, double>> drift;
    for (const SeriesRow& r : report->series)
      if (r.psi) drift.emplace_back(r.t, std::abs(*r.psi - phase->psi_infty));
    report->rate_phase = fit_or_floor(drift, window);
  }

  auto glued = track::glue(p.left, p.right, path);
  if (cfg.oracle_enabled) {
    const double psi0 = cfg.psi0;
    auto u0 = [&](double x) {
      return x < psi0 ? cfg.u_minus + p.pert_left.value(x) : cfg.u_plus + p.pert_right.value(x);
    };
    const oracle::FvState init =
        oracle::fv_project_anchored(u0, p.span.first, p.span.second, cfg.oracle_dx, cfg.psi0);
    const model::ScalarLaw& law_fv = p.law_base;  // single-source scenarios only
    if (cfg.source_left || cfg.source_right) {
      report->extra.emplace_back("oracle_note", "disabled: per-side sources");
    } else {
      std::size_t row_i = 0;
      const std::size_t n_rows = report->series.size();
      oracle::CompareSpec spec;
      const int cell_stride = std::max(1, init.size() / 2000);
      oracle::evolve_fv(law_fv, init, p.left->times(), cfg.oracle_cfl,
                        [&](const oracle::FvState& st) {
                          if (path.valid_at(st.t))
                            report->series[row_i].oracle_l1 =
                                oracle::compare_state(glued, st, spec);
                          if (row_i == 0 || row_i == n_rows / 2 || row_i + 1 == n_rows)
                            for (int i = 0; i < st.size(); i += cell_stride)
                              report->snapshots.push_back(
                                  {"oracle", st.t, st.x_center(i), st.cells[i], 0.0});
                          ++row_i;
                        });
      report->oracle_l1_final = report->series.back().oracle_l1;
    }
  }

  CheckEval eval{report};
  for (const CheckSpec& c : cfg.checks) {
    if (c.key == "check.rate_sup_left") eval.band(c, report->rate_sup_left);
    else if (c.key == "check.rate_sup_right") eval.band(c, report->rate_sup_right);
    else if (c.key == "check.rate_grad_left") eval.band(c, report->rate_grad_left);
    else if (c.key == "check.rate_grad_right") eval.band(c, report->rate_grad_right);
    else if (c.key == "check.rate_phase_max") eval.rate_upper(c, report->rate_phase);
    else if (c.key == "check.lax_margin_min") eval.lower_bound(c, report->lax_margin_min, "min");
    else if (c.key == "check.psi_shift") {
      std::optional<double> shift;
      if (report->psi_infty) shift = *report->psi_infty - cfg.psi0;
      eval.target(c, shift, "psi_shift");
    } else if (c.key == "check.oracle_l1_max") {
      eval.upper_bound(c, report->oracle_l1_final, "l1");
    }
  }
}

void run_two_shock(const ScenarioConfig& cfg, DecayReport* report) {
  const model::ScalarLaw law = build_law(cfg.law);
  std::mt19937_64 rng(cfg.seed);
  const C1Fn pertL = build_perturbation(cfg.perturb_left, rng);
  const C1Fn pertM = build_perturbation(cfg.perturb_middle, rng);
  const C1Fn pertR = build_perturbation(cfg.perturb_right, rng);

  const double extL = shape_extent(cfg.perturb_left) +
                      std::abs(cfg.perturb_left.center - cfg.psi_s0) + 1.0;
  const double extR = shape_extent(cfg.perturb_right) +
                      std::abs(cfg.perturb_right.center - cfg.psi0) + 1.0;

  FanSetup fanL = make_side_fan(
      ext::Side::left, cfg.psi_s0, pertL,
      cfg.perturb_left.shape == PerturbationSpec::Shape::none ? 0 : extL, cfg.u_minus,
      cfg.amplification);
  FanSetup fanR = make_side_fan(
      ext::Side::right, cfg.psi0, pertR,
      cfg.perturb_right.shape == PerturbationSpec::Shape::none ? 0 : extR, cfg.u_plus,
      cfg.amplification);

  // Middle piece: state offset plus perturbation, relative to the left endstate.
  const C1Fn mid_v = offset(pertM, cfg.u_middle - cfg.u_minus);
  const auto mid_data = ext::IntervalData::sampled(cfg.psi_s0, cfg.psi0, mid_v, 20001);
  ext::ExtendedData mid_ext = ext::extend_interval(mid_data, cfg.amplification);
  const double mid_delta = std::max(mid_ext.delta_lower, mid_ext.delta_upper);
  const ext::ExtendedData fanM = ext::whole_line(offset(mid_ext.fn, cfg.u_minus));

  const double amp_bound = cfg.amplification *
                               (std::abs(cfg.u_middle - cfg.u_minus) +
                                std::max({cfg.perturb_left.amplitude, cfg.perturb_middle.amplitude,
                                          cfg.perturb_right.amplitude})) +
                           0.1;
  const double u_lo = std::min({cfg.u_minus, cfg.u_plus, cfg.u_middle}) - amp_bound;
  const double u_hi = std::max({cfg.u_minus, cfg.u_plus, cfg.u_middle}) + amp_bound;
  const double maxfp = poly_max_abs_on(law.flux_prime(), u_lo, u_hi);
  std::pair<double, double> span;
  if (cfg.span_override) {
    span = *cfg.span_override;
  } else {
    const double half = std::max(extL, extR) + std::abs(cfg.psi0 - cfg.psi_s0) +
                        cfg.t_final * maxfp + 4.0 * std::max({fanL.delta, fanR.delta, mid_delta}) +
                        2.0;
    span = {std::min(cfg.psi_s0, cfg.psi0) - half, std::max(cfg.psi_s0, cfg.psi0) + half};
  }

  auto left = std::make_shared<chars::SmoothSolution>(
      chars::evolve_smooth(law, fanL.data, cfg.t_final, cfg.n_curves, span, cfg.dt,
                           cfg.store_every));
  auto middle = std::make_shared<chars::SmoothSolution>(
      chars::evolve_smooth(law, fanM, cfg.t_final, cfg.n_curves, span, cfg.dt, cfg.store_every));
  auto right = std::make_shared<chars::SmoothSolution>(
      chars::evolve_smooth(law, fanR.data, cfg.t_final, cfg.n_curves, span, cfg.dt,
                           cfg.store_every));
  report->fan_max_gap = std::max({left->max_gap(), middle->max_gap(), right->max_gap()});

  if (!left->alive() || !middle->alive() || !right->alive()) {
    report->status = "blowup";
    const auto& ev = !left->alive() ? left->blowup()
                                    : (!middle->alive() ? middle->blowup() : right->blowup());
    report->blowup_t = ev->t;
    report->blowup_x = ev->x;
    for (const CheckSpec& c : cfg.checks)
      report->checks.push_back({c.key, false, 0.0, "fan blow-up"});
    return;
  }

  const auto times = left->times();
  track::GluedSolution glued = track::two_shock_evolution(law, left, middle, right, cfg.psi_s0,
                                                          cfg.psi0, cfg.t_final, cfg.dt);
  const track::ShockPath& main = glued.main_path();
  report->lax_margin_min = main.min_lax_margin();
  if (glued.merge()) {
    report->t_star = glued.merge()->t_star;
    report->extra.emplace_back("x_star", format_double(glued.merge()->x_star));
    // Speed jump across the merge: s_f(u_l, u_r) - s_f(u_c, u_r) at t*.
    const double ts = glued.merge()->t_star, xs = glued.merge()->x_star;
    const double ul = left->sample(ts, xs).u;
    const double uc = middle->sample(ts, xs).u;
    const double ur = right->sample(ts, xs).u;
    report->extra.emplace_back(
        "psi_prime_jump",
        format_double(model::slope(law, ul, ur) - model::slope(law, uc, ur)));
  }

  for (double t : times) {
    SeriesRow row;
    row.t = t;
    if (main.valid_at(t)) {
      const double psi_t = main.psi_at(t);
      row.psi = psi_t;
      row.psi_prime = main.psi_prime_at(t);
      row.lax_margin_left = interp_at(main.times, main.lax_left, t);
      row.lax_margin_right = interp_at(main.times, main.lax_right, t);
      const bool pre_merge = glued.merge() && t < glued.merge()->t_star;
      const double left_edge =
          pre_merge && glued.secondary_path() ? glued.secondary_path()->psi_at(t) : psi_t;
      row.sup_err_left = left->sup_dist_to(t, cfg.u_minus, span.first, left_edge);
      row.sup_err_right = right->sup_dist_to(t, cfg.u_plus, psi_t, span.second);
    }
    report->series.push_back(row);
  }

  if (cfg.oracle_enabled) {
    auto u0 = [&](double x) {
      if (x < cfg.psi_s0) return cfg.u_minus + pertL.value(x);
      if (x < cfg.psi0) return cfg.u_middle + pertM.value(x);
      return cfg.u_plus + pertR.value(x);
    };
    const oracle::FvState init = oracle::fv_project_anchored(u0, span.first, span.second, cfg.oracle_dx, cfg.psi0);
    const double min_jump = std::max(1e-4, 0.01 * std::abs(cfg.u_middle - cfg.u_minus));
    const auto t_fv =
        oracle::fv_merge_time(law, init, cfg.t_final, cfg.oracle_cfl, min_jump);
    if (t_fv) report->t_star_oracle = *t_fv;
  }

  CheckEval eval{report};
  for (const CheckSpec& c : cfg.checks) {
    if (c.key == "check.t_star") {
      eval.target(c, report->t_star, "t_star");
    } else if (c.key == "check.t_star_vs_oracle") {
      std::optional<double> dev;
      if (report->t_star && report->t_star_oracle)
        dev = std::abs(*report->t_star - *report->t_star_oracle);
      eval.upper_bound(c, dev, "deviation");
    } else if (c.key == "check.lax_margin_min") {
      eval.lower_bound(c, report->lax_margin_min, "min");
    }
  }
}

void run_toy(const ScenarioConfig& cfg, DecayReport* report) {
  const model::ScalarLaw law(Polynomial{0.0, 0.0, 0.5 * cfg.toy_alpha},
                             model::linear_source(cfg.toy_beta), "toy");
  const double amp = cfg.toy_w0 * cfg.toy_width;
  const auto data = ext::whole_line(sine_wave(amp, cfg.toy_width, 0.0));

  const double maxfp = std::abs(cfg.toy_alpha) * std::abs(amp) + 0.1;
  const double half = 8.0 * cfg.toy_width + cfg.t_final * maxfp + 1.0;
  const int n_curves = cfg.n_curves % 2 == 0 ? cfg.n_curves + 1 : cfg.n_curves;

  const auto closed = chars::toy_blowup_time(cfg.toy_alpha, cfg.toy_beta, cfg.toy_w0);
  if (closed) report->toy_time_closed_form = *closed;

  chars::SmoothSolution sol = chars::evolve_smooth(law, data, cfg.t_final, n_curves,
                                                   {-half, half}, cfg.dt, cfg.store_every);
  report->fan_max_gap = sol.max_gap();
  capture_fan_snapshots(report, sol, "fan");
  if (!sol.alive()) {
    report->toy_time_fan = sol.blowup()->t;
    report->blowup_t = sol.blowup()->t;
    report->blowup_x = sol.blowup()->x;
  }

  double max_w = 0.0;
  const double signf2 = cfg.toy_alpha >= 0.0 ? 1.0 : -1.0;
  for (double t : sol.times()) {
    SeriesRow row;
    row.t = t;
    row.sup_err_left = sol.sup_dist_to(t, 0.0, -half, half);
    row.negpart_grad_left = sol.sup_neg_part_grad(t, signf2, -half, half);
    max_w = std::max(max_w, *row.negpart_grad_left);
    report->series.push_back(row);
  }
  for (std::size_t ti = 0; ti < sol.times().size(); ++ti)
    for (int c = 0; c < sol.curve_count(); ++c)
      max_w = std::max(max_w, std::abs(sol.node(static_cast<int>(ti), c).w));
  report->toy_max_abs_w = max_w;

  for (const CheckSpec& c : cfg.checks) {
    if (c.key == "check.blowup_time") {
      CheckResult r{c.key, false, 0.0, ""};
      if (c.params.size() != 2) throw ConfigError("config: check.blowup_time expects 'value tol'");
      if (!report->toy_time_closed_form || !report->toy_time_fan) {
        r.detail = "no blow-up detected";
      } else {
        const double dev = std::max({std::abs(*report->toy_time_closed_form - c.params[0]),
                                     std::abs(*report->toy_time_fan - c.params[0]),
                                     std::abs(*report->toy_time_fan -
                                              *report->toy_time_closed_form)});
        r.margin = c.params[1] - dev;
        r.pass = r.margin >= 0.0;
        r.detail = "closed=" + format_double(*report->toy_time_closed_form) +
                   " fan=" + format_double(*report->toy_time_fan);
      }
      report->checks.push_back(std::move(r));
    } else if (c.key == "check.global_bound") {
      CheckResult r{c.key, false, 0.0, ""};
      if (c.params.size() != 1) throw ConfigError("config: check.global_bound expects one bound");
      if (!sol.alive() || report->toy_time_closed_form) {
        r.detail = sol.alive() ? "closed form predicts blow-up" : "fan blew up";
      } else {
        r.margin = c.params[0] - max_w;
        r.pass = r.margin >= 0.0;
        r.detail = "max|w|=" + format_double(max_w);
      }
      report->checks.push_back(std::move(r));
    }
  }
}

void run_resolvent_check(const ScenarioConfig& cfg, DecayReport* report) {
  const ResolventSuiteResult res = run_resolvent_suite(cfg.resolvent_count, cfg.seed);
  report->resolvent_residual_max = res.max_residual;
  report->resolvent_slack_max = res.max_slack;
  report->resolvent_positivity_min = res.min_positivity;
  report->extra.emplace_back("resolvent_count", format_double(res.count));

  CheckEval eval{report};
  for (const CheckSpec& c : cfg.checks) {
    if (c.key == "check.resolvent_residual_max")
      eval.upper_bound(c, report->resolvent_residual_max, "residual");
    else if (c.key == "check.resolvent_slack_max")
      eval.upper_bound(c, report->resolvent_slack_max, "slack");
    else if (c.key == "check.resolvent_positivity_min")
      eval.lower_bound(c, report->resolvent_positivity_min, "min_re");
  }
}

void run_spectrum_scan(const ScenarioConfig& cfg, DecayReport* report) {
  const model::ScalarLaw law = build_law(cfg.law);
  const auto shock =
      model::RiemannShockSpec::from_endstates(law, cfg.u_minus, cfg.u_plus, cfg.psi0);
  const auto re = cfg.spectrum_re.value_or(std::array<double, 3>{-3.0, 1.5, 13});
  const auto im = cfg.spectrum_im.value_or(std::array<double, 3>{0.0, 0.0, 1});
  const int n_re = static_cast<int>(re[2]);
  const int n_im = static_cast<int>(im[2]);
  int idx = 0;
  for (int i = 0; i < n_re; ++i) {
    for (int j = 0; j < n_im; ++j) {
      const double lr = n_re == 1 ? re[0] : re[0] + (re[1] - re[0]) * i / (n_re - 1);
      const double li = n_im == 1 ? im[0] : im[0] + (im[1] - im[0]) * j / (n_im - 1);
      const spectral::Complex lambda{lr, li};
      const auto verdict = spectral::spectrum_classify(
          law, shock, lambda, [](double) { return spectral::Complex{0.0, 0.0}; },
          spectral::Complex{cfg.spectrum_phi, 0.0});
      std::string cls;
      switch (verdict.cls) {
        case spectral::SpectrumClass::eigenvalue:
          cls = "eigenvalue mult=" + std::to_string(verdict.multiplicity);
          break;
        case spectral::SpectrumClass::essential_spectrum: cls = "essential"; break;
        case spectral::SpectrumClass::resolvent_set: cls = "resolvent"; break;
      }
      std::string v = format_double(lr) + " " + format_double(li) + " " + cls;
      if (verdict.psi_hat) {
        const double im = verdict.psi_hat->imag();
        v += " psi_hat=" + format_double(verdict.psi_hat->real()) + (im < 0 ? "-" : "+") +
             format_double(std::abs(im)) + "i";
      }
      report->extra.emplace_back("lambda_" + std::to_string(idx++), v);
    }
  }
}

}  // namespace

DecayReport run_scenario(const ScenarioConfig& config) {
  DecayReport report;
  report.kind = config.kind;
  switch (config.kind) {
    case ScenarioKind::constant_state: run_constant_state(config, &report); break;
    case ScenarioKind::riemann_shock: run_riemann_shock(config, &report); break;
    case ScenarioKind::shock_plus_small_shock: run_two_shock(config, &report); break;
    case ScenarioKind::toy_blowup: run_toy(config, &report); break;
    case ScenarioKind::resolvent_check: run_resolvent_check(config, &report); break;
    case ScenarioKind::spectrum_scan: run_spectrum_scan(config, &report); break;
  }
  return report;
}

RefineResult oracle_refinement(const ScenarioConfig& config, double t_compare,
                               const std::vector<double>& dxs) {
  if (config.kind != ScenarioKind::riemann_shock)
    throw ParamError("oracle_refinement: riemann_shock scenarios only");
  if (config.source_left || config.source_right)
    throw ParamError("oracle_refinement: per-side sources have no single-law oracle");
  ScenarioConfig cfg = config;
  cfg.t_final = std::max(t_compare, cfg.dt);

  ShockPieces p = build_shock_fans(cfg);
  if (!p.left->alive() || !p.right->alive())
    throw BlowupError("oracle_refinement: fan blow-up before the comparison time");
  track::ShockPath path =
      track::track_shock(p.law_base, *p.left, *p.right, cfg.psi0, cfg.t_final, cfg.dt);
  auto glued = track::glue(p.left, p.right, path);

  auto u0 = [&](double x) {
    return x < cfg.psi0 ? cfg.u_minus + p.pert_left.value(x) : cfg.u_plus + p.pert_right.value(x);
  };

  RefineResult out;
  for (double dx : dxs) {
    const oracle::FvState init =
        oracle::fv_project_anchored(u0, p.span.first, p.span.second, dx, cfg.psi0);
    const auto traj = oracle::evolve_fv(p.law_base, init, {t_compare}, cfg.oracle_cfl);
    out.l1_by_dx.emplace_back(dx, oracle::compare_state(glued, traj.back(), {}));
  }
  // Fitted order: least-squares slope of log L1 against log dx.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(out.l1_by_dx.size());
  for (const auto& [dx, l1] : out.l1_by_dx) {
    const double x = std::log(dx), y = std::log(std::max(l1, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

ResolventSuiteResult run_resolvent_suite(int count, std::uint64_t seed) {
  ResolventSuiteResult out;
  out.count = count;
  out.min_positivity = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  bool any_positivity = false;
  for (int k = 0; k < count; ++k) {
    const bool positivity_case = k % 4 == 0;
    const double a0 = uni(1.3, 1.8) * (uni(0, 1) < 0.5 ? 1.0 : -1.0);
    const double a1 = uni(-0.3, 0.3);
    const double wa = uni(0.3, 1.0), pa = uni(0.0, 6.28);
    const double b0 = uni(-1.5, -0.5);
    const double b1 = uni(-0.2, 0.2);
    const double wb = uni(0.3, 1.0), pb = uni(0.0, 6.28);
    const double margin = uni(1.0, 2.0);
    const double eta = positivity_case ? 0.0 : uni(-0.5, 0.5);

    auto a = [=](double x) { return a0 + a1 * std::sin(wa * x + pa); };
    auto b = [=](double x) { return b0 + b1 * std::cos(wb * x + pb); };
    const double c1 = positivity_case ? uni(0.2, 1.0) : uni(-1.0, 1.0);
    const double c2 = positivity_case ? uni(0.2, 1.0) : uni(-1.0, 1.0);
    const double m1 = uni(-4.0, 4.0), m2 = uni(-4.0, 4.0);
    const double w1 = uni(1.0, 2.0), w2 = uni(1.0, 2.0);
    auto F = [=](double x) {
      const double s1 = (x - m1) / w1, s2 = (x - m2) / w2;
      return spectral::Complex{c1 * std::exp(-0.5 * s1 * s1) + c2 * std::exp(-0.5 * s2 * s2), 0.0};
    };
    const spectral::Complex lambda{b0 + std::abs(b1) + margin, eta};

    const auto prob = spectral::ResolventProblem::make(a, b, F, lambda);
    const auto solution = spectral::resolvent_solve(prob);

    double f_sup = 0.0;
    for (double x : solution.x) f_sup = std::max(f_sup, std::abs(F(x).real()));
    if (f_sup <= 0.0) continue;

    // Sixth-order centered differences keep the measurement independent of the
    // integral representation used by the solver.
    const double h = solution.h;
    const int n = static_cast<int>(solution.x.size());
    double max_res = 0.0;
    for (int i = 3; i < n - 3; ++i) {
      const spectral::Complex d =
          (-solution.v[i - 3] + 9.0 * solution.v[i - 2] - 45.0 * solution.v[i - 1] +
           45.0 * solution.v[i + 1] - 9.0 * solution.v[i + 2] + solution.v[i + 3]) /
          (60.0 * h);
      const double x = solution.x[i];
      const spectral::Complex res =
          lambda * solution.v[i] + a(x) * d - b(x) * solution.v[i] - F(x);
      max_res = std::max(max_res, std::abs(res));
    }
    out.max_residual = std::max(out.max_residual, max_res / f_sup);

    const double bound = f_sup / prob.margin();
    out.max_slack = std::max(out.max_slack, (solution.sup_abs() - bound) / bound);

    if (positivity_case) {
      any_positivity = true;
      for (const auto& z : solution.v)
        out.min_positivity = std::min(out.min_positivity, z.real());
    }
  }
  if (!any_positivity) out.min_positivity = 0.0;
  return out;
}

}  // namespace shockfit::harness
