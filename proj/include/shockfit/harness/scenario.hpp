#pragma once

#include <random>

#include "shockfit/c1fn.hpp"
#include "shockfit/harness/config.hpp"
#include "shockfit/harness/report.hpp"
#include "shockfit/model.hpp"

namespace shockfit::harness {

/// Assembles the law from the config; the optional override replaces the source.
model::ScalarLaw build_law(const LawSpec& spec,
                           const std::optional<SourceOverride>& source_override = std::nullopt);

/// Materializes a perturbation shape; spline shapes draw their nodes from rng.
C1Fn build_perturbation(const PerturbationSpec& spec, std::mt19937_64& rng);

/// Runs one configured scenario end to end and assembles the report.
/// Stage failures surface as library errors; a fan blow-up outside toy_blowup
/// is reported in the DecayReport (status "blowup"), not thrown.
DecayReport run_scenario(const ScenarioConfig& config);

/// Oracle refinement study: L1 discrepancy between the glued solution and the
/// finite-volume reference at time t_compare for each dx, plus the fitted
/// convergence order (slope of log L1 against log dx).
struct RefineResult {
  std::vector<std::pair<double, double>> l1_by_dx;
  double order = 0.0;
};
RefineResult oracle_refinement(const ScenarioConfig& config, double t_compare,
                               const std::vector<double>& dxs);

/// Randomized resolvent verification suite (residual, sup-bound slack,
/// positivity) over problems drawn within the solver's preconditions.
struct ResolventSuiteResult {
  double max_residual = 0.0;     // relative to ||F||_inf
  double max_slack = 0.0;        // relative excess over the sup bound
  double min_positivity = 0.0;   // min Re v over the nonnegative-forcing cases
  int count = 0;
};
ResolventSuiteResult run_resolvent_suite(int count, std::uint64_t seed);

}  // namespace shockfit::harness
