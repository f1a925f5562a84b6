#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "shockfit/errors.hpp"
#include "shockfit/harness/config.hpp"
#include "shockfit/harness/fit.hpp"
#include "shockfit/harness/report.hpp"
#include "shockfit/harness/scenario.hpp"

using namespace shockfit;
using namespace shockfit::harness;

namespace {

const char* kShockConfig = R"(
# stationary reference shock with small bumps
scenario = riemann_shock
law.flux = burgers
law.source = bistable
shock.u_minus = 1
shock.u_plus = -1
shock.psi0 = 0
perturb.left.shape = sech
perturb.left.amplitude = 0.05
perturb.left.width = 1
perturb.left.center = -2
perturb.right.shape = none
numerics.dt = 0.002
numerics.t_final = 2
numerics.n_curves = 257
check.lax_margin_min = 0.5
)";

}  // namespace

TEST_CASE("fit_decay_rate on exact and noisy exponentials") {
  std::vector<std::pair<double, double>> series;
  for (int i = 0; i < 50; ++i) {
    const double t = 0.1 * i;
    series.emplace_back(t, 3.0 * std::exp(-2.0 * t));
  }
  const auto fit = fit_decay_rate(series, {0.0, 5.0});
  CHECK(fit.rate == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(fit.log_constant == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(fit.residual <= 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  auto noisy = series;
  for (auto& [t, v] : noisy) v *= 1.0 + noise(rng);
  const auto nfit = fit_decay_rate(noisy, {0.0, 5.0});
  CHECK(std::abs(nfit.rate + 2.0) <= 0.05);

  std::vector<std::pair<double, double>> floored;
  for (int i = 0; i <= 60; ++i) {
    const double t = 0.05 * i;
    floored.emplace_back(t, std::exp(-2.0 * t) + 1e-9);
  }
  const auto ffit = fit_decay_rate(floored, {0.0, 3.0});
  CHECK(std::abs(ffit.rate + 2.0) <= 0.02);
}

TEST_CASE("fit_decay_rate error paths") {
  std::vector<std::pair<double, double>> series;
  for (int i = 0; i < 20; ++i) series.emplace_back(0.1 * i, 1.0);
  CHECK_THROWS_AS((void)fit_decay_rate(series, {0.0, 0.3}), FitError);  // < 8 samples
  series[5].second = 0.0;
  CHECK_THROWS_AS((void)fit_decay_rate(series, {0.0, 2.0}), FitError);  // nonpositive value
}

TEST_CASE("config parsing round trip and validation") {
  const ScenarioConfig cfg = parse_config(kShockConfig);
  CHECK(cfg.kind == ScenarioKind::riemann_shock);
  CHECK(cfg.u_minus == 1.0);
  CHECK(cfg.u_plus == -1.0);
  CHECK(cfg.perturb_left.shape == PerturbationSpec::Shape::sech);
  CHECK(cfg.perturb_left.center == -2.0);
  CHECK(cfg.perturb_right.shape == PerturbationSpec::Shape::none);
  CHECK(cfg.dt == 0.002);
  CHECK(cfg.n_curves == 257);
  REQUIRE(cfg.checks.size() == 1);
  CHECK(cfg.checks[0].key == "check.lax_margin_min");
  CHECK(cfg.effective_fit_window().first == doctest::Approx(0.5));

  CHECK_THROWS_AS((void)parse_config("scenario = riemann_shock\nbogus.key = 1\n"
                                     "shock.u_minus = 1\nshock.u_plus = -1\n"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config("shock.u_minus = 1\n"), ConfigError);  // no scenario
  CHECK_THROWS_AS((void)parse_config("scenario = riemann_shock\nshock.u_minus = 1\n"
                                     "shock.u_plus = -1\nshock.u_plus = -1\n"),
                  ConfigError);  // duplicate
  CHECK_THROWS_AS((void)parse_config("scenario = constant_state\nstate.u_bar = -1\n"
                                     "perturb.amplitude = -0.1\n"),
                  ConfigError);  // negative amplitude
  CHECK_THROWS_AS((void)parse_config("scenario = constant_state\nstate.u_bar = nope\n"),
                  ConfigError);
  // Keys from another scenario kind are rejected.
  CHECK_THROWS_AS((void)parse_config("scenario = constant_state\nstate.u_bar = -1\n"
                                     "toy.alpha = 1\n"),
                  ConfigError);
}

TEST_CASE("constant state scenario fits the dissipation rate") {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::constant_state;
  cfg.law.flux_family = "burgers";
  cfg.law.source_family = "bistable";
  cfg.u_bar = -1.0;
  cfg.perturb = {PerturbationSpec::Shape::sech, 0.05, 1.0, 0.0};
  cfg.t_final = 3.0;
  cfg.dt = 2e-3;
  cfg.n_curves = 513;
  cfg.checks = {{"check.rate_sup_left", {-2.2, -1.8}}, {"check.rate_grad_left", {-2.2, -1.8}}};
  const DecayReport rep = run_scenario(cfg);
  CHECK(rep.status == "ok");
  CHECK(rep.all_pass());
  REQUIRE(rep.rate_sup_left.has_value());
  CHECK(rep.rate_sup_left->fit.rate == doctest::Approx(-2.0).epsilon(0.1));
  CHECK(rep.series.front().t == 0.0);
  CHECK(rep.series.back().t == doctest::Approx(3.0));
  CHECK(rep.exit_code() == 0);
}

TEST_CASE("unperturbed shock reports floored series and passes") {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::riemann_shock;
  cfg.law.flux_family = "burgers";
  cfg.law.source_family = "bistable";
  cfg.u_minus = 1.0;
  cfg.u_plus = -1.0;
  cfg.psi0 = 0.3;
  cfg.t_final = 1.0;
  cfg.dt = 2e-3;
  cfg.n_curves = 65;
  cfg.checks = {{"check.rate_sup_left", {-2.2, -1.8}},
                {"check.lax_margin_min", {0.8}},
                {"check.psi_shift", {0.0, 1e-12}}};
  const DecayReport rep = run_scenario(cfg);
  CHECK(rep.status == "ok");
  REQUIRE(rep.rate_sup_left.has_value());
  CHECK(rep.rate_sup_left->at_floor);
  REQUIRE(rep.psi_infty.has_value());
  CHECK(*rep.psi_infty == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(rep.all_pass());

  const std::string summary = render_summary(rep);
  CHECK(summary.find("rate_sup_left = at_floor") != std::string::npos);
  CHECK(summary.find("check.psi_shift = pass") != std::string::npos);
  CHECK(summary.find("all_checks_pass = true") != std::string::npos);
}

TEST_CASE("toy scenario reports both blow-up measurements") {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::toy_blowup;
  cfg.toy_alpha = 1.0;
  cfg.toy_beta = 1.0;
  cfg.toy_w0 = -2.0;
  cfg.t_final = 1.0;
  cfg.dt = 1e-4;
  cfg.n_curves = 129;
  cfg.store_every = 100;
  cfg.checks = {{"check.blowup_time", {std::log(2.0), 1e-3}}};
  const DecayReport rep = run_scenario(cfg);
  REQUIRE(rep.toy_time_closed_form.has_value());
  REQUIRE(rep.toy_time_fan.has_value());
  CHECK(std::abs(*rep.toy_time_closed_form - *rep.toy_time_fan) <= 1e-3);
  CHECK(rep.all_pass());
}

TEST_CASE("blow-up outside the toy scenario fails checks without throwing") {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::constant_state;
  cfg.law.flux_family = "burgers";
  cfg.law.source_family = "zero";
  cfg.u_bar = 0.0;
  // Steep data around a sourceless state forms a shock quickly.
  cfg.perturb = {PerturbationSpec::Shape::sine, 0.5, 0.25, 0.0};
  cfg.t_final = 2.0;
  cfg.dt = 1e-3;
  cfg.n_curves = 129;
  cfg.span_override = std::make_pair(-4.0, 4.0);
  cfg.checks = {{"check.rate_sup_left", {-2.2, -1.8}}};
  const DecayReport rep = run_scenario(cfg);
  CHECK(rep.status == "blowup");
  REQUIRE(rep.blowup_t.has_value());
  CHECK(*rep.blowup_t == doctest::Approx(0.5).epsilon(0.05));
  CHECK_FALSE(rep.all_pass());
  CHECK(rep.exit_code() == 2);
}

TEST_CASE("series CSV has the exact column layout") {
  DecayReport rep;
  const std::string header = render_series_csv(rep);
  CHECK(header ==
        "t,sup_err_left,sup_err_right,negpart_grad_left,negpart_grad_right,psi,psi_prime,"
        "lax_margin_left,lax_margin_right,oracle_l1\n");

  SeriesRow row;
  row.t = 0.5;
  row.sup_err_left = 0.25;
  row.psi = 1.0;
  rep.series.push_back(row);
  const std::string csv = render_series_csv(rep);
  CHECK(csv.find("\n0.5,0.25,,,,1,,,,\n") != std::string::npos);
}

TEST_CASE("summary contains every enabled check exactly once") {
  const ScenarioConfig cfg = parse_config(kShockConfig);
  const DecayReport rep = run_scenario(cfg);
  const std::string summary = render_summary(rep);
  std::size_t count = 0, pos = 0;
  while ((pos = summary.find("check.lax_margin_min = ", pos)) != std::string::npos) {
    ++count;
    pos += 1;
  }
  CHECK(count == 1);
  CHECK(summary.find("margin=") != std::string::npos);
}

TEST_CASE("two-shock summary carries the merge time") {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::shock_plus_small_shock;
  cfg.law.flux_family = "burgers";
  cfg.law.source_family = "zero";
  cfg.u_minus = 1.0;
  cfg.u_plus = -1.0;
  cfg.u_middle = 0.8;
  cfg.psi_s0 = -0.5;
  cfg.psi0 = 0.0;
  cfg.t_final = 1.0;
  cfg.dt = 1e-3;
  cfg.n_curves = 65;
  cfg.checks = {{"check.t_star", {0.5, 1e-3}}};
  const DecayReport rep = run_scenario(cfg);
  REQUIRE(rep.t_star.has_value());
  CHECK(*rep.t_star == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(render_summary(rep).find("t_star = ") != std::string::npos);
  CHECK(rep.all_pass());
}

TEST_CASE("identical configs produce byte-identical reports") {
  const ScenarioConfig cfg = parse_config(kShockConfig);
  const DecayReport a = run_scenario(cfg);
  const DecayReport b = run_scenario(cfg);
  CHECK(render_series_csv(a) == render_series_csv(b));
  CHECK(render_summary(a) == render_summary(b));
}

TEST_CASE("spline perturbations are reproducible from the seed") {
  std::mt19937_64 rng1(42), rng2(42), rng3(43);
  const PerturbationSpec spec{PerturbationSpec::Shape::spline, 0.3, 2.0, 0.0};
  const C1Fn a = build_perturbation(spec, rng1);
  const C1Fn b = build_perturbation(spec, rng2);
  const C1Fn c = build_perturbation(spec, rng3);
  bool all_equal = true, any_diff = false;
  for (double x = -2.0; x <= 2.0; x += 0.1) {
    all_equal = all_equal && a.value(x) == b.value(x);
    any_diff = any_diff || a.value(x) != c.value(x);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("emit_report writes the configured files") {
  DecayReport rep;
  rep.kind = ScenarioKind::constant_state;
  SeriesRow row;
  row.t = 0.0;
  row.sup_err_left = 1.0;
  rep.series.push_back(row);
  const std::string dir = "./test_harness_out";
  std::filesystem::create_directories(dir);
  OutputPaths paths{dir + "/series.csv", dir + "/summary.txt", ""};
  emit_report(rep, paths);
  std::ifstream csv(paths.csv);
  REQUIRE(csv.good());
  std::string line;
  std::getline(csv, line);
  CHECK(line.find("t,sup_err_left") == 0);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit_report(rep, {"/nonexistent_dir_xyz/out.csv", "", ""}), IoError);
}

TEST_CASE("resolvent suite summary within bounds on a small draw") {
  const ResolventSuiteResult res = run_resolvent_suite(8, 7u);
  CHECK(res.count == 8);
  CHECK(res.max_residual <= 1e-6);
  CHECK(res.max_slack <= 1e-6);
  CHECK(res.min_positivity >= -1e-10);
}

TEST_CASE("spectrum scan emits one verdict per grid point") {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::spectrum_scan;
  cfg.law.flux_family = "burgers";
  cfg.law.source_family = "bistable";
  cfg.u_minus = 1.0;
  cfg.u_plus = -1.0;
  cfg.spectrum_re = std::array<double, 3>{-3.0, 1.0, 5};
  cfg.spectrum_im = std::array<double, 3>{0.0, 0.0, 1};
  const DecayReport rep = run_scenario(cfg);
  int verdicts = 0;
  for (const auto& [k, v] : rep.extra)
    if (k.rfind("lambda_", 0) == 0) ++verdicts;
  CHECK(verdicts == 5);
  CHECK(rep.series.empty());
  CHECK(render_series_csv(rep).find('\n') == render_series_csv(rep).size() - 1);
}
