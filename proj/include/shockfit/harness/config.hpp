#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace shockfit::harness {

enum class ScenarioKind {
  constant_state,
  riemann_shock,
  shock_plus_small_shock,
  toy_blowup,
  resolvent_check,
  spectrum_scan,
};

std::string to_string(ScenarioKind k);

struct PerturbationSpec {
  enum class Shape { none, sech, gaussian, sine, spline };
  Shape shape = Shape::none;
  double amplitude = 0.0;
  double width = 1.0;
  double center = 0.0;
};

struct LawSpec {
  std::string flux_family = "burgers";  // burgers | cubic | poly
  std::vector<double> flux_coeffs;
  std::string source_family = "bistable";  // bistable | linear | zero | poly
  std::vector<double> source_coeffs;
};

struct SourceOverride {
  std::string family;
  std::vector<double> coeffs;
};

/// One enabled acceptance-style check; parameters are interpreted per key
/// (bands, value/tolerance pairs, or single thresholds).
struct CheckSpec {
  std::string key;
  std::vector<double> params;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::riemann_shock;
  LawSpec law;
  std::optional<SourceOverride> source_left, source_right;

  // Geometry / states.
  double u_bar = 0.0;                    // constant_state
  double u_minus = 0.0, u_plus = 0.0;    // shock scenarios
  double psi0 = 0.0;
  double psi_s0 = 0.0, u_middle = 0.0;   // two-shock scenario
  double toy_alpha = 0.0, toy_beta = 0.0, toy_w0 = 0.0, toy_width = 1.0;

  PerturbationSpec perturb;  // constant_state (whole line)
  PerturbationSpec perturb_left, perturb_right, perturb_middle;

  // Numerics.
  double dt = 1e-3;
  double t_final = 4.0;
  int n_curves = 2049;
  int store_every = 10;
  double amplification = 1.5;
  std::optional<std::pair<double, double>> span_override;

  std::optional<std::pair<double, double>> fit_window;  // default [T/4, 3T/4]

  bool oracle_enabled = false;
  double oracle_dx = 0.01;
  double oracle_cfl = 0.9;

  int resolvent_count = 100;  // resolvent_check

  // spectrum_scan grids: (lo, hi, count) per axis, and the position forcing.
  std::optional<std::array<double, 3>> spectrum_re, spectrum_im;
  double spectrum_phi = 1.0;

  std::uint64_t seed = 1;
  std::vector<CheckSpec> checks;

  struct Outputs {
    std::string csv, summary, snapshots;
  } outputs;

  std::pair<double, double> effective_fit_window() const {
    if (fit_window) return *fit_window;
    return {0.25 * t_final, 0.75 * t_final};
  }
};

/// Parses the flat `key = value` configuration grammar (see README). Unknown
/// keys, keys foreign to the scenario kind, and malformed values raise
/// ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

}  // namespace shockfit::harness
