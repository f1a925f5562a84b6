#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "shockfit/characteristics.hpp"
#include "shockfit/model.hpp"

namespace shockfit::shocktracker {

using characteristics::SmoothSolution;

/// A discontinuity path integrated from the jump condition, with the one-sided
/// trace values and Lax margins recorded at every node.
struct ShockPath {
  std::vector<double> times;
  std::vector<double> psi;
  std::vector<double> psi_prime;
  std::vector<double> u_left, u_right;
  std::vector<double> lax_left, lax_right;  // f'(u_l) - psi', psi' - f'(u_r)
  std::optional<double> valid_until;        // set when a Lax margin crossed zero

  std::size_t size() const { return times.size(); }
  double t_final() const { return times.back(); }
  bool valid_at(double t) const { return !valid_until || t <= *valid_until; }

  double psi_at(double t) const;        // cubic Hermite between nodes
  double psi_prime_at(double t) const;  // linear between nodes
  double min_lax_margin() const;
};

/// Integrates psi' = s_f(u_left(t, psi), u_right(t, psi)) by RK4 on the given
/// step; stops early (setting valid_until) if a Lax margin crosses zero.
ShockPath track_shock(const model::ScalarLaw& law, const SmoothSolution& left,
                      const SmoothSolution& right, double psi0, double t_final, double dt);

struct MergeEvent {
  double t_star = 0.0;
  double x_star = 0.0;
};

/// Entropy solution assembled from smooth pieces separated by shock paths.
class GluedSolution {
 public:
  struct Value {
    double u_left = 0.0;
    double u_right = 0.0;
    bool at_shock = false;
    double u() const { return u_left; }  // both sides agree off the shock
  };

  GluedSolution(std::shared_ptr<const SmoothSolution> left,
                std::shared_ptr<const SmoothSolution> right, ShockPath path);
  GluedSolution(std::shared_ptr<const SmoothSolution> left,
                std::shared_ptr<const SmoothSolution> middle,
                std::shared_ptr<const SmoothSolution> right, ShockPath main,
                ShockPath secondary, std::optional<MergeEvent> merge);

  /// Piece selection is strictly by position relative to the path(s) at t;
  /// exactly on a path both one-sided values are returned.
  Value eval(double t, double x) const;

  const ShockPath& main_path() const { return main_; }
  const ShockPath* secondary_path() const { return secondary_ ? &*secondary_ : nullptr; }
  const std::optional<MergeEvent>& merge() const { return merge_; }
  const SmoothSolution& left() const { return *left_; }
  const SmoothSolution& right() const { return *right_; }
  const SmoothSolution* middle() const { return middle_.get(); }

 private:
  std::shared_ptr<const SmoothSolution> left_, middle_, right_;
  ShockPath main_;
  std::optional<ShockPath> secondary_;
  std::optional<MergeEvent> merge_;
};

GluedSolution glue(std::shared_ptr<const SmoothSolution> left,
                   std::shared_ptr<const SmoothSolution> right, ShockPath path);

struct PhaseResult {
  double psi_infty = 0.0;
  double tail_bound = 0.0;
  double truncation_time = 0.0;
};

/// psi_infty = psi(0) + trapezoidal integral of (psi' - sigma) over the path;
/// the neglected tail is estimated as |psi'(T) - sigma| / |rate_hint| and
/// reported. Throws FitError when |psi' - sigma| fails to decay.
PhaseResult asymptotic_phase(const ShockPath& path, double sigma, double rate_hint);

/// Integrates the two interface paths of a small shock riding ahead of a large
/// one, brackets their first crossing t* by bisection (to dt * 1e-3), and
/// restarts the surviving path from (t*, psi_r(t*)) with the left/right jump
/// condition. When no crossing occurs before t_final the merge event is absent.
GluedSolution two_shock_evolution(const model::ScalarLaw& law,
                                  std::shared_ptr<const SmoothSolution> left,
                                  std::shared_ptr<const SmoothSolution> middle,
                                  std::shared_ptr<const SmoothSolution> right, double psi_s0,
                                  double psi0, double t_final, double dt);

}  // namespace shockfit::shocktracker
