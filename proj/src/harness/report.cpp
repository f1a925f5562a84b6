#include "shockfit/harness/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "shockfit/errors.hpp"

namespace shockfit::harness {

bool DecayReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

void line(std::ostringstream& os, const std::string& key, const std::string& value) {
  os << key << " = " << value << "\n";
}

void opt_line(std::ostringstream& os, const std::string& key, const std::optional<double>& v) {
  if (v) line(os, key, format_double(*v));
}

void fit_lines(std::ostringstream& os, const std::string& key,
               const std::optional<FitOutcome>& f) {
  if (!f) return;
  if (f->at_floor) {
    line(os, key, "at_floor");
    return;
  }
  line(os, key, format_double(f->fit.rate));
  line(os, key + "_constant", format_double(f->fit.log_constant));
  line(os, key + "_residual", format_double(f->fit.residual));
  line(os, key + "_window",
       format_double(f->window_lo) + " " + format_double(f->window_hi));
}

}  // namespace

std::string render_summary(const DecayReport& report) {
  std::ostringstream os;
  line(os, "scenario", to_string(report.kind));
  line(os, "status", report.status);
  fit_lines(os, "rate_sup_left", report.rate_sup_left);
  fit_lines(os, "rate_sup_right", report.rate_sup_right);
  fit_lines(os, "rate_grad_left", report.rate_grad_left);
  fit_lines(os, "rate_grad_right", report.rate_grad_right);
  fit_lines(os, "rate_phase", report.rate_phase);
  opt_line(os, "psi_infty", report.psi_infty);
  opt_line(os, "tail_bound", report.tail_bound);
  opt_line(os, "lax_margin_min", report.lax_margin_min);
  opt_line(os, "t_star", report.t_star);
  opt_line(os, "t_star_oracle", report.t_star_oracle);
  opt_line(os, "toy_time_closed_form", report.toy_time_closed_form);
  opt_line(os, "toy_time_fan", report.toy_time_fan);
  opt_line(os, "toy_max_abs_w", report.toy_max_abs_w);
  opt_line(os, "blowup_t", report.blowup_t);
  opt_line(os, "blowup_x", report.blowup_x);
  opt_line(os, "resolvent_residual_max", report.resolvent_residual_max);
  opt_line(os, "resolvent_slack_max", report.resolvent_slack_max);
  opt_line(os, "resolvent_positivity_min", report.resolvent_positivity_min);
  opt_line(os, "oracle_l1_final", report.oracle_l1_final);
  if (report.fan_max_gap > 0.0) line(os, "fan_max_gap", format_double(report.fan_max_gap));
  for (const auto& [k, v] : report.extra) line(os, k, v);
  for (const CheckResult& c : report.checks) {
    std::string v = std::string(c.pass ? "pass" : "fail") + " margin=" + format_double(c.margin);
    if (!c.detail.empty()) v += " (" + c.detail + ")";
    line(os, c.key, v);
  }
  line(os, "all_checks_pass", report.all_pass() ? "true" : "false");
  return os.str();
}

std::string render_series_csv(const DecayReport& report) {
  std::ostringstream os;
  os << "t,sup_err_left,sup_err_right,negpart_grad_left,negpart_grad_right,psi,psi_prime,"
        "lax_margin_left,lax_margin_right,oracle_l1\n";
  for (const SeriesRow& r : report.series) {
    os << format_double(r.t) << ',' << cell(r.sup_err_left) << ',' << cell(r.sup_err_right) << ','
       << cell(r.negpart_grad_left) << ',' << cell(r.negpart_grad_right) << ',' << cell(r.psi)
       << ',' << cell(r.psi_prime) << ',' << cell(r.lax_margin_left) << ','
       << cell(r.lax_margin_right) << ',' << cell(r.oracle_l1) << "\n";
  }
  return os.str();
}

std::string render_snapshots_csv(const DecayReport& report) {
  std::ostringstream os;
  os << "piece,t,x,u,w\n";
  for (const SnapshotPoint& p : report.snapshots) {
    os << p.piece << ',' << format_double(p.t) << ',' << format_double(p.x) << ','
       << format_double(p.u) << ',' << format_double(p.w) << "\n";
  }
  return os.str();
}

void emit_report(const DecayReport& report, const OutputPaths& paths) {
  const auto write = [](const std::string& path, const std::string& content) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file: " + path);
    f << content;
    if (!f) throw IoError("failed writing output file: " + path);
  };
  write(paths.csv, render_series_csv(report));
  write(paths.summary, render_summary(report));
  write(paths.snapshots, render_snapshots_csv(report));
}

}  // namespace shockfit::harness
