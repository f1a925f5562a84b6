#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shockfit/harness/config.hpp"
#include "shockfit/harness/fit.hpp"

namespace shockfit::harness {

struct FitOutcome {
  FitResult fit;
  double window_lo = 0.0, window_hi = 0.0;
  bool at_floor = false;  // series was identically at the value floor; no fit ran
};

struct CheckResult {
  std::string key;
  bool pass = false;
  double margin = 0.0;  // distance to the nearest bound (positive when passing)
  std::string detail;
};

/// One time-series record; absent fields render as empty CSV cells.
struct SeriesRow {
  double t = 0.0;
  std::optional<double> sup_err_left, sup_err_right;
  std::optional<double> negpart_grad_left, negpart_grad_right;
  std::optional<double> psi, psi_prime;
  std::optional<double> lax_margin_left, lax_margin_right;
  std::optional<double> oracle_l1;
};

struct SnapshotPoint {
  std::string piece;  // left | right | middle | fan | oracle
  double t = 0.0, x = 0.0, u = 0.0, w = 0.0;
};

struct DecayReport {
  ScenarioKind kind = ScenarioKind::riemann_shock;
  std::string status = "ok";  // ok | blowup | truncated
  std::vector<SeriesRow> series;

  std::optional<FitOutcome> rate_sup_left, rate_sup_right;
  std::optional<FitOutcome> rate_grad_left, rate_grad_right;
  std::optional<FitOutcome> rate_phase;
  std::optional<double> psi_infty, tail_bound, lax_margin_min;
  std::optional<double> t_star, t_star_oracle;
  std::optional<double> toy_time_closed_form, toy_time_fan, toy_max_abs_w;
  std::optional<double> blowup_t, blowup_x;
  std::optional<double> resolvent_residual_max, resolvent_slack_max, resolvent_positivity_min;
  std::optional<double> oracle_l1_final;
  double fan_max_gap = 0.0;

  std::vector<std::pair<std::string, std::string>> extra;  // ordered extra summary lines
  std::vector<SnapshotPoint> snapshots;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  /// 0 when every enabled check passes; 2 on any failing check, and on a fan
  /// blow-up outside the toy scenario even when no checks are configured
  /// (scenario errors exit 3 at the CLI boundary before a report exists).
  int exit_code() const {
    if (status == "blowup" && kind != ScenarioKind::toy_blowup) return 2;
    return all_pass() ? 0 : 2;
  }
};

std::string format_double(double v);  // 12 significant digits
std::string render_summary(const DecayReport& report);
std::string render_series_csv(const DecayReport& report);
std::string render_snapshots_csv(const DecayReport& report);

struct OutputPaths {
  std::string csv, summary, snapshots;
};

/// Writes whichever outputs have nonempty paths; I/O failures surface as IoError.
void emit_report(const DecayReport& report, const OutputPaths& paths);

}  // namespace shockfit::harness
