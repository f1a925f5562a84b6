#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "shockfit/extension.hpp"
#include "shockfit/model.hpp"

namespace shockfit::characteristics {

/// Threshold on |w| past which the gradient is declared blown up.
inline constexpr double kGradientBlowupThreshold = 1e6;

/// One point on a characteristic curve: position, value, spatial derivative.
struct CharacteristicState {
  double x = 0.0;
  double u = 0.0;
  double w = 0.0;
};

struct StepOutcome {
  CharacteristicState state;
  bool blown_up = false;
  double blow_frac = 1.0;  // fraction of dt at which the threshold was crossed
};

/// One classical fourth-order step of x' = f'(u), u' = g(u), w' = g'(u) w - f''(u) w^2.
StepOutcome advance_characteristic(const model::ScalarLaw& law, const CharacteristicState& state,
                                   double dt);

struct BlowupEvent {
  double t = 0.0;
  double x = 0.0;
};

/// A fan of characteristic curves advanced on a fixed time step, with
/// snapshots stored every `store_every` steps and dense (cubic Hermite)
/// output in time between snapshots.
class SmoothSolution {
 public:
  struct Sample {
    double u = 0.0;
    double w = 0.0;
  };

  bool alive() const { return !blowup_.has_value(); }
  const std::optional<BlowupEvent>& blowup() const { return blowup_; }
  const std::vector<double>& times() const { return times_; }
  double t_final() const { return times_.back(); }
  int curve_count() const { return n_curves_; }
  const model::ScalarLaw& law() const { return law_; }
  /// Maximum spacing between adjacent curves over all stored snapshots.
  double max_gap() const { return max_gap_; }

  const CharacteristicState& node(int time_index, int curve) const {
    return fan_[time_index][curve];
  }

  /// Curve state at an arbitrary time within the stored window.
  CharacteristicState state_on_curve(double t, int curve) const;

  std::pair<double, double> span_at(double t) const;

  /// Interpolated solution value at (t, x): cubic Hermite in x for u (node
  /// slopes are the carried w), linear for w. Throws SpanError outside the fan
  /// and BlowupError past a blow-up.
  Sample sample(double t, double x) const;

  /// Sup of |u - uref| over curve nodes and midpoints with x in [x_lo, x_hi].
  double sup_dist_to(double t, double uref, double x_lo, double x_hi) const;
  /// Sup of the negative part of signf2 * w over nodes and midpoints in [x_lo, x_hi].
  double sup_neg_part_grad(double t, double signf2, double x_lo, double x_hi) const;

 private:
  friend SmoothSolution evolve_smooth(const model::ScalarLaw&, const extension::ExtendedData&,
                                      double, int, std::pair<double, double>, double, int);
  explicit SmoothSolution(model::ScalarLaw law) : law_(std::move(law)) {}

  int locate_time(double t) const;  // snapshot index with times_[i] <= t <= times_[i+1]

  model::ScalarLaw law_;
  std::vector<double> times_;
  std::vector<std::vector<CharacteristicState>> fan_;
  std::optional<BlowupEvent> blowup_;
  int n_curves_ = 0;
  double max_gap_ = 0.0;
};

/// Seeds n_curves characteristics from exact data evaluations over x_span and
/// advances them to t_final or the first blow-up (gradient threshold or curve
/// crossing, bisected to 1e-6 in time). The caller pads x_span by the domain
/// of dependence.
SmoothSolution evolve_smooth(const model::ScalarLaw& law, const extension::ExtendedData& data,
                             double t_final, int n_curves, std::pair<double, double> x_span,
                             double dt, int store_every = 10);

/// Finite blow-up time of w' = -beta w - alpha w^2, if any: none when
/// alpha*w0 >= -beta; else ln(alpha w0 / (alpha w0 + beta)) / beta (or
/// -1/(alpha w0) when beta == 0).
std::optional<double> toy_blowup_time(double alpha, double beta, double w0);

}  // namespace shockfit::characteristics
