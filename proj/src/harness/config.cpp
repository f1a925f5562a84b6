#include "shockfit/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "shockfit/errors.hpp"

namespace shockfit::harness {

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::constant_state: return "constant_state";
    case ScenarioKind::riemann_shock: return "riemann_shock";
    case ScenarioKind::shock_plus_small_shock: return "shock_plus_small_shock";
    case ScenarioKind::toy_blowup: return "toy_blowup";
    case ScenarioKind::resolvent_check: return "resolvent_check";
    case ScenarioKind::spectrum_scan: return "spectrum_scan";
  }
  return "?";
}

namespace {

struct RawConfig {
  // Insertion-ordered key/value list; duplicate keys are rejected up front.
  std::vector<std::pair<std::string, std::string>> entries;
  std::map<std::string, bool> consumed;

  std::optional<std::string> take(const std::string& key) {
    for (auto& [k, v] : entries)
      if (k == key) {
        consumed[k] = true;
        return v;
      }
    return std::nullopt;
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::istringstream is(value);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      if (!std::isfinite(v)) throw ConfigError("config: non-finite value in '" + key + "'");
      out.push_back(v);
    } catch (const std::invalid_argument&) {
      throw ConfigError("config: cannot parse number '" + tok + "' in key '" + key + "'");
    } catch (const std::out_of_range&) {
      throw ConfigError("config: number out of range in key '" + key + "'");
    }
  }
  return out;
}

double parse_one(const std::string& key, const std::string& value) {
  const auto v = parse_numbers(key, value);
  if (v.size() != 1) throw ConfigError("config: key '" + key + "' expects exactly one number");
  return v[0];
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

PerturbationSpec::Shape parse_shape(const std::string& key, const std::string& value) {
  if (value == "none") return PerturbationSpec::Shape::none;
  if (value == "sech") return PerturbationSpec::Shape::sech;
  if (value == "gaussian") return PerturbationSpec::Shape::gaussian;
  if (value == "sine") return PerturbationSpec::Shape::sine;
  if (value == "spline") return PerturbationSpec::Shape::spline;
  throw ConfigError("config: unknown shape '" + value + "' in key '" + key + "'");
}

void read_perturbation(RawConfig& raw, const std::string& prefix, PerturbationSpec* out) {
  if (auto v = raw.take(prefix + ".shape")) out->shape = parse_shape(prefix + ".shape", *v);
  if (auto v = raw.take(prefix + ".amplitude")) {
    out->amplitude = parse_one(prefix + ".amplitude", *v);
    if (out->amplitude < 0.0)
      throw ConfigError("config: '" + prefix + ".amplitude' must be nonnegative");
  }
  if (auto v = raw.take(prefix + ".width")) {
    out->width = parse_one(prefix + ".width", *v);
    if (!(out->width > 0.0)) throw ConfigError("config: '" + prefix + ".width' must be positive");
  }
  if (auto v = raw.take(prefix + ".center")) out->center = parse_one(prefix + ".center", *v);
}

void read_law(RawConfig& raw, ScenarioConfig* cfg) {
  if (auto v = raw.take("law.flux")) {
    if (*v != "burgers" && *v != "cubic" && *v != "poly")
      throw ConfigError("config: law.flux must be burgers, cubic, or poly");
    cfg->law.flux_family = *v;
  }
  if (auto v = raw.take("law.flux_coeffs")) cfg->law.flux_coeffs = parse_numbers("law.flux_coeffs", *v);
  if (cfg->law.flux_family == "poly" && cfg->law.flux_coeffs.empty())
    throw ConfigError("config: law.flux = poly requires law.flux_coeffs");

  auto read_source = [&](const std::string& fam_key, const std::string& coeff_key,
                         std::string* family, std::vector<double>* coeffs) -> bool {
    bool seen = false;
    if (auto v = raw.take(fam_key)) {
      if (*v != "bistable" && *v != "linear" && *v != "zero" && *v != "poly")
        throw ConfigError("config: " + fam_key + " must be bistable, linear, zero, or poly");
      *family = *v;
      seen = true;
    }
    if (auto v = raw.take(coeff_key)) {
      *coeffs = parse_numbers(coeff_key, *v);
      seen = true;
    }
    if (*family == "poly" && coeffs->empty())
      throw ConfigError("config: " + fam_key + " = poly requires " + coeff_key);
    if (*family == "linear" && coeffs->size() != 1)
      throw ConfigError("config: " + fam_key + " = linear requires one coefficient (beta)");
    return seen;
  };
  read_source("law.source", "law.source_coeffs", &cfg->law.source_family, &cfg->law.source_coeffs);

  SourceOverride left{cfg->law.source_family, cfg->law.source_coeffs};
  if (read_source("law.source_left", "law.source_left_coeffs", &left.family, &left.coeffs))
    cfg->source_left = left;
  SourceOverride right{cfg->law.source_family, cfg->law.source_coeffs};
  if (read_source("law.source_right", "law.source_right_coeffs", &right.family, &right.coeffs))
    cfg->source_right = right;
}

const std::vector<std::string>& known_checks(ScenarioKind kind) {
  static const std::vector<std::string> fan_checks = {
      "check.rate_sup_left",  "check.rate_sup_right", "check.rate_grad_left",
      "check.rate_grad_right"};
  static const std::map<ScenarioKind, std::vector<std::string>> table = [] {
    std::map<ScenarioKind, std::vector<std::string>> m;
    m[ScenarioKind::constant_state] = {"check.rate_sup_left", "check.rate_grad_left",
                                       "check.oracle_l1_max"};
    m[ScenarioKind::riemann_shock] = {"check.rate_sup_left",  "check.rate_sup_right",
                                      "check.rate_grad_left", "check.rate_grad_right",
                                      "check.rate_phase_max", "check.lax_margin_min",
                                      "check.psi_shift",      "check.oracle_l1_max"};
    m[ScenarioKind::shock_plus_small_shock] = {"check.t_star", "check.t_star_vs_oracle",
                                               "check.lax_margin_min"};
    m[ScenarioKind::toy_blowup] = {"check.blowup_time", "check.global_bound"};
    m[ScenarioKind::resolvent_check] = {"check.resolvent_residual_max",
                                        "check.resolvent_slack_max",
                                        "check.resolvent_positivity_min"};
    m[ScenarioKind::spectrum_scan] = {};
    (void)fan_checks;
    return m;
  }();
  return table.at(kind);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  RawConfig raw;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: empty key or value on line " + std::to_string(lineno));
    for (const auto& [k, v] : raw.entries)
      if (k == key) throw ConfigError("config: duplicate key '" + key + "'");
    raw.entries.emplace_back(key, value);
  }

  ScenarioConfig cfg;
  const auto kind_str = raw.take("scenario");
  if (!kind_str) throw ConfigError("config: missing required key 'scenario'");
  if (*kind_str == "constant_state") cfg.kind = ScenarioKind::constant_state;
  else if (*kind_str == "riemann_shock") cfg.kind = ScenarioKind::riemann_shock;
  else if (*kind_str == "shock_plus_small_shock") cfg.kind = ScenarioKind::shock_plus_small_shock;
  else if (*kind_str == "toy_blowup") cfg.kind = ScenarioKind::toy_blowup;
  else if (*kind_str == "resolvent_check") cfg.kind = ScenarioKind::resolvent_check;
  else if (*kind_str == "spectrum_scan") cfg.kind = ScenarioKind::spectrum_scan;
  else throw ConfigError("config: unknown scenario '" + *kind_str + "'");

  read_law(raw, &cfg);
  if (cfg.source_left || cfg.source_right) {
    if (cfg.kind != ScenarioKind::riemann_shock)
      throw ConfigError("config: per-side source overrides apply to riemann_shock only");
  }

  // Geometry keys, gated by scenario kind.
  const bool has_shock = cfg.kind == ScenarioKind::riemann_shock ||
                         cfg.kind == ScenarioKind::shock_plus_small_shock ||
                         cfg.kind == ScenarioKind::spectrum_scan;
  if (cfg.kind == ScenarioKind::constant_state) {
    const auto v = raw.take("state.u_bar");
    if (!v) throw ConfigError("config: constant_state requires state.u_bar");
    cfg.u_bar = parse_one("state.u_bar", *v);
    read_perturbation(raw, "perturb", &cfg.perturb);
  }
  if (has_shock) {
    const auto um = raw.take("shock.u_minus");
    const auto up = raw.take("shock.u_plus");
    if (!um || !up) throw ConfigError("config: shock scenarios require shock.u_minus/u_plus");
    cfg.u_minus = parse_one("shock.u_minus", *um);
    cfg.u_plus = parse_one("shock.u_plus", *up);
    if (auto v = raw.take("shock.psi0")) cfg.psi0 = parse_one("shock.psi0", *v);
  }
  if (cfg.kind == ScenarioKind::riemann_shock) {
    read_perturbation(raw, "perturb.left", &cfg.perturb_left);
    read_perturbation(raw, "perturb.right", &cfg.perturb_right);
  }
  if (cfg.kind == ScenarioKind::shock_plus_small_shock) {
    const auto ps = raw.take("shock.psi_s0");
    const auto umid = raw.take("shock.u_middle");
    if (!ps || !umid)
      throw ConfigError("config: two-shock scenario requires shock.psi_s0 and shock.u_middle");
    cfg.psi_s0 = parse_one("shock.psi_s0", *ps);
    cfg.u_middle = parse_one("shock.u_middle", *umid);
    read_perturbation(raw, "perturb.left", &cfg.perturb_left);
    read_perturbation(raw, "perturb.middle", &cfg.perturb_middle);
    read_perturbation(raw, "perturb.right", &cfg.perturb_right);
  }
  if (cfg.kind == ScenarioKind::toy_blowup) {
    const auto a = raw.take("toy.alpha");
    const auto b = raw.take("toy.beta");
    const auto w = raw.take("toy.w0");
    if (!a || !b || !w) throw ConfigError("config: toy_blowup requires toy.alpha/beta/w0");
    cfg.toy_alpha = parse_one("toy.alpha", *a);
    cfg.toy_beta = parse_one("toy.beta", *b);
    cfg.toy_w0 = parse_one("toy.w0", *w);
    if (auto v = raw.take("toy.width")) cfg.toy_width = parse_one("toy.width", *v);
    if (cfg.toy_beta < 0) throw ConfigError("config: toy.beta must be nonnegative");
  }
  if (cfg.kind == ScenarioKind::resolvent_check) {
    if (auto v = raw.take("resolvent.count")) {
      cfg.resolvent_count = static_cast<int>(parse_one("resolvent.count", *v));
      if (cfg.resolvent_count < 1) throw ConfigError("config: resolvent.count must be positive");
    }
  }
  if (cfg.kind == ScenarioKind::spectrum_scan) {
    auto read_grid = [&](const std::string& key) -> std::optional<std::array<double, 3>> {
      if (auto v = raw.take(key)) {
        const auto nums = parse_numbers(key, *v);
        if (nums.size() != 3 || nums[2] < 1)
          throw ConfigError("config: " + key + " expects 'lo hi count'");
        return std::array<double, 3>{nums[0], nums[1], nums[2]};
      }
      return std::nullopt;
    };
    cfg.spectrum_re = read_grid("spectrum.re");
    cfg.spectrum_im = read_grid("spectrum.im");
    if (auto v = raw.take("spectrum.phi")) cfg.spectrum_phi = parse_one("spectrum.phi", *v);
  }

  // Numerics and outputs.
  if (auto v = raw.take("numerics.dt")) cfg.dt = parse_one("numerics.dt", *v);
  if (!(cfg.dt > 0)) throw ConfigError("config: numerics.dt must be positive");
  if (auto v = raw.take("numerics.t_final")) cfg.t_final = parse_one("numerics.t_final", *v);
  if (!(cfg.t_final > 0)) throw ConfigError("config: numerics.t_final must be positive");
  if (auto v = raw.take("numerics.n_curves")) {
    cfg.n_curves = static_cast<int>(parse_one("numerics.n_curves", *v));
    if (cfg.n_curves < 16) throw ConfigError("config: numerics.n_curves must be >= 16");
  }
  if (auto v = raw.take("numerics.store_every")) {
    cfg.store_every = static_cast<int>(parse_one("numerics.store_every", *v));
    if (cfg.store_every < 1) throw ConfigError("config: numerics.store_every must be >= 1");
  }
  if (auto v = raw.take("numerics.amplification")) {
    cfg.amplification = parse_one("numerics.amplification", *v);
    if (!(cfg.amplification > 1.0))
      throw ConfigError("config: numerics.amplification must exceed 1");
  }
  if (auto v = raw.take("numerics.span")) {
    const auto nums = parse_numbers("numerics.span", *v);
    if (nums.size() != 2 || !(nums[0] < nums[1]))
      throw ConfigError("config: numerics.span expects 'lo hi' with lo < hi");
    cfg.span_override = std::make_pair(nums[0], nums[1]);
  }
  if (auto v = raw.take("fit.window")) {
    const auto nums = parse_numbers("fit.window", *v);
    if (nums.size() != 2 || !(nums[0] < nums[1]))
      throw ConfigError("config: fit.window expects 'lo hi' with lo < hi");
    cfg.fit_window = std::make_pair(nums[0], nums[1]);
  }
  if (auto v = raw.take("oracle.enabled")) cfg.oracle_enabled = parse_bool("oracle.enabled", *v);
  if (auto v = raw.take("oracle.dx")) {
    cfg.oracle_dx = parse_one("oracle.dx", *v);
    if (!(cfg.oracle_dx > 0)) throw ConfigError("config: oracle.dx must be positive");
  }
  if (auto v = raw.take("oracle.cfl")) {
    cfg.oracle_cfl = parse_one("oracle.cfl", *v);
    if (!(cfg.oracle_cfl > 0) || cfg.oracle_cfl > 0.9)
      throw ConfigError("config: oracle.cfl must lie in (0, 0.9]");
  }
  if (auto v = raw.take("seed")) {
    const double s = parse_one("seed", *v);
    if (s < 0 || s != std::floor(s)) throw ConfigError("config: seed must be a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = raw.take("output.csv")) cfg.outputs.csv = *v;
  if (auto v = raw.take("output.summary")) cfg.outputs.summary = *v;
  if (auto v = raw.take("output.snapshots")) cfg.outputs.snapshots = *v;

  // Checks allowed for this scenario kind.
  for (const std::string& key : known_checks(cfg.kind)) {
    if (auto v = raw.take(key)) cfg.checks.push_back({key, parse_numbers(key, *v)});
  }

  for (const auto& [k, v] : raw.entries)
    if (!raw.consumed.count(k))
      throw ConfigError("config: unknown key '" + k + "' for scenario " + to_string(cfg.kind));
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace shockfit::harness
