#pragma once

#include "shockfit/c1fn.hpp"

namespace shockfit::extension {

enum class Side { left, right };

struct SlopeBounds {
  double neg_part = 0.0;  // sup of (v')_-
  double pos_part = 0.0;  // sup of (v')_+
  double sup = 0.0;       // sup of |v'|
};

/// C1 data on an open half-line, with its one-sided boundary trace and the
/// norms the extension construction consumes.
struct HalfLineData {
  Side side = Side::right;
  double boundary = 0.0;  // x-coordinate of the open end
  C1Fn data;              // defined beyond `boundary` on the given side
  double boundary_value = 0.0;
  double boundary_slope = 0.0;
  double sup_norm = 0.0;
  SlopeBounds slope_bounds;

  static HalfLineData from_fields(Side side, double boundary, C1Fn data, double boundary_value,
                                  double boundary_slope, double sup_norm, SlopeBounds bounds);
  /// Computes the trace and norms on a uniform grid of n points covering
  /// `extent` from the boundary (boundary included).
  static HalfLineData sampled(Side side, double boundary, C1Fn data, double extent, int n);
};

/// C1 data on a bounded open interval, traced at both ends.
struct IntervalData {
  double lo = 0.0, hi = 0.0;
  C1Fn data;
  double value_lo = 0.0, slope_lo = 0.0;
  double value_hi = 0.0, slope_hi = 0.0;
  double sup_norm = 0.0;
  SlopeBounds slope_bounds;

  static IntervalData sampled(double lo, double hi, C1Fn data, int n);
};

/// Whole-line C1 data produced by the blend construction.
struct ExtendedData {
  C1Fn fn;
  double delta_lower = 0.0;  // blend width below the data region (0 if none)
  double delta_upper = 0.0;  // blend width above the data region (0 if none)
  double amplification = 1.0;
  bool delta_capped = false;
};

/// Extends half-line data to the whole line: original values on its half-line,
/// a quadratic blend of width delta = 2*(C0-1)*sup / max(1, |boundary slope|)
/// next to the boundary, constant beyond. Requires amplification > 1.
/// Degenerate sup_norm == 0 extends by the constant boundary value.
ExtendedData extend_half_line(const HalfLineData& data, double amplification);

/// Same construction applied at both ends of a bounded interval.
ExtendedData extend_interval(const IntervalData& data, double amplification);

/// Wraps data already defined on the whole line.
ExtendedData whole_line(C1Fn data);

}  // namespace shockfit::extension
