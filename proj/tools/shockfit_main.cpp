#include <CLI11.hpp>
#include <array>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shockfit/errors.hpp"
#include "shockfit/harness/acceptance.hpp"
#include "shockfit/harness/config.hpp"
#include "shockfit/harness/report.hpp"
#include "shockfit/harness/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace shockfit;
using namespace shockfit::harness;

std::string joined(const std::string& out_dir, const std::string& configured,
                   const std::string& fallback) {
  const std::string name = configured.empty() ? fallback : configured;
  if (name.empty()) return name;
  fs::path p(name);
  if (p.is_absolute() || out_dir.empty()) return name;
  return (fs::path(out_dir) / p).string();
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const ScenarioConfig cfg = parse_config_file(config_path);
  const DecayReport report = run_scenario(cfg);
  OutputPaths paths;
  paths.csv = joined(out_dir, cfg.outputs.csv, out_dir.empty() ? "" : "series.csv");
  paths.summary = joined(out_dir, cfg.outputs.summary, out_dir.empty() ? "" : "summary.txt");
  paths.snapshots = joined(out_dir, cfg.outputs.snapshots, "");
  if (!out_dir.empty()) fs::create_directories(out_dir);
  emit_report(report, paths);
  std::cout << render_summary(report);
  return report.exit_code();
}

int cmd_verify(const std::string& suite) {
  if (suite != "acceptance" && suite != "all")
    throw ConfigError("unknown suite '" + suite + "' (available: acceptance)");
  const auto results = run_acceptance(std::cout);
  for (const auto& r : results)
    if (!r.pass) return 2;
  return 0;
}

std::array<double, 3> parse_axis(const std::string& spec) {
  std::array<double, 3> out{0, 0, 1};
  std::istringstream is(spec);
  std::string tok;
  int i = 0;
  while (std::getline(is, tok, ':') && i < 3) out[i++] = std::stod(tok);
  if (i != 3 || out[2] < 1) throw ConfigError("lambda grid axis must be lo:hi:count");
  return out;
}

int cmd_spectrum(const std::string& config_path, const std::string& grid) {
  ScenarioConfig cfg = parse_config_file(config_path);
  if (cfg.kind != ScenarioKind::spectrum_scan)
    throw ConfigError("spectrum subcommand requires a spectrum_scan config");
  if (!grid.empty()) {
    // re_lo:re_hi:n_re[,im_lo:im_hi:n_im]
    const auto comma = grid.find(',');
    cfg.spectrum_re = parse_axis(grid.substr(0, comma));
    if (comma != std::string::npos) cfg.spectrum_im = parse_axis(grid.substr(comma + 1));
  }
  const DecayReport report = run_scenario(cfg);
  std::cout << render_summary(report);
  if (!cfg.outputs.summary.empty()) emit_report(report, {"", cfg.outputs.summary, ""});
  return 0;
}

int cmd_compare(const std::string& config_path, double dx, int refine, double t_compare) {
  const ScenarioConfig cfg = parse_config_file(config_path);
  std::vector<double> dxs;
  for (int k = 0; k < refine; ++k) dxs.push_back(dx / static_cast<double>(1 << k));
  const RefineResult res = oracle_refinement(cfg, t_compare, dxs);
  for (const auto& [d, l1] : res.l1_by_dx)
    std::cout << "dx = " << format_double(d) << "  l1 = " << format_double(l1) << "\n";
  std::cout << "order = " << format_double(res.order) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shock-fitting simulator and verification harness for scalar balance laws"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite = "acceptance", grid;
  double dx = 0.01, t_compare = 1.0;
  int refine = 3;

  auto* run = app.add_subcommand("run", "run one scenario from a config file");
  run->add_option("--config", config_path, "scenario config path")->required();
  run->add_option("--out", out_dir, "output directory for CSV/summary files");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "suite name (acceptance)");

  auto* spectrum = app.add_subcommand("spectrum", "classify lambda values for a shock");
  spectrum->add_option("--config", config_path, "spectrum_scan config path")->required();
  spectrum->add_option("--lambda-grid", grid, "re_lo:re_hi:n[,im_lo:im_hi:n]");

  auto* compare = app.add_subcommand("compare", "oracle refinement study");
  compare->add_option("--config", config_path, "riemann_shock config path")->required();
  compare->add_option("--dx", dx, "coarsest cell size");
  compare->add_option("--refine", refine, "number of refinement levels");
  compare->add_option("--t", t_compare, "comparison time");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (verify->parsed()) return cmd_verify(suite);
    if (spectrum->parsed()) return cmd_spectrum(config_path, grid);
    if (compare->parsed()) return cmd_compare(config_path, dx, refine, t_compare);
  } catch (const shockfit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
