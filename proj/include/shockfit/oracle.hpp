#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "shockfit/model.hpp"
#include "shockfit/shocktracker.hpp"

namespace shockfit::oracle {

/// Cell data for the finite-volume reference scheme.
struct FvState {
  double dx = 0.0;
  double x_left = 0.0;  // left edge of the first cell
  std::vector<double> cells;
  double t = 0.0;

  int size() const { return static_cast<int>(cells.size()); }
  double x_center(int i) const { return x_left + (i + 0.5) * dx; }
};

/// Exact-Riemann-solver (Osher) flux: min of f over [ul, ur] when ul <= ur,
/// max over [ur, ul] otherwise; interior extrema located from the critical
/// points of the polynomial flux.
double godunov_flux(const model::ScalarLaw& law, double ul, double ur);

/// Midpoint projection of a pointwise function onto cells covering [x_lo, x_hi].
FvState fv_project(const std::function<double(double)>& u0, double x_lo, double x_hi, double dx);

/// Same, with the grid shifted so `anchor` falls exactly mid-cell. Pinning the
/// sub-cell phase of a discontinuity across resolutions removes the grid-offset
/// noise that otherwise dominates refinement studies.
FvState fv_project_anchored(const std::function<double(double)>& u0, double x_lo, double x_hi,
                            double dx, double anchor);

/// Godunov transport with Strang source splitting (half RK4 source step,
/// transport, half source step) under CFL step control; copy (outflow)
/// boundaries. States are reported at the requested output times; the observer,
/// when given, sees each reported state as it is produced.
std::vector<FvState> evolve_fv(const model::ScalarLaw& law, const FvState& init,
                               const std::vector<double>& output_times, double cfl,
                               const std::function<void(const FvState&)>& observer = nullptr);

struct CompareSpec {
  enum class Norm { l1, linf_away_from_shock };
  Norm norm = Norm::l1;
  double radius = 0.0;  // exclusion radius around tracked shocks (linf variant)
};

/// Discrepancy between a glued solution and one finite-volume state on their
/// common window. Throws WindowError when no state matches t or windows do not
/// overlap.
double compare(const shocktracker::GluedSolution& glued, const std::vector<FvState>& trajectory,
               double t, const CompareSpec& spec);
double compare_state(const shocktracker::GluedSolution& glued, const FvState& fv,
                     const CompareSpec& spec);

double discrete_tv(const FvState& s);
double total_mass(const FvState& s);

/// Interface positions of the two steepest descents separated by more than two
/// cells, deepest first; the second entry is absent when no descent beyond
/// min_jump remains outside the two-cell window of the first.
struct ShockLoci {
  double primary = 0.0;
  std::optional<double> secondary;
};
std::optional<ShockLoci> shock_loci(const FvState& s, double min_jump);

/// First time at which the two descent loci coincide within two cells (the
/// secondary locus disappears into the primary's window). Steps the scheme
/// internally and checks after every step.
std::optional<double> fv_merge_time(const model::ScalarLaw& law, const FvState& init,
                                    double t_max, double cfl, double min_jump);

}  // namespace shockfit::oracle
