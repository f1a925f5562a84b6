#include "shockfit/extension.hpp"

#include <algorithm>
#include <cmath>

#include "shockfit/errors.hpp"

namespace shockfit::extension {

namespace {

struct Norms {
  double sup = 0.0;
  SlopeBounds sb;
};

Norms scan(const C1Fn& fn, double x0, double x1, int n) {
  Norms out;
  for (int i = 0; i < n; ++i) {
    const double x = x0 + (x1 - x0) * static_cast<double>(i) / (n - 1);
    out.sup = std::max(out.sup, std::abs(fn.value(x)));
    const double s = fn.slope(x);
    out.sb.neg_part = std::max(out.sb.neg_part, std::max(0.0, -s));
    out.sb.pos_part = std::max(out.sb.pos_part, std::max(0.0, s));
    out.sb.sup = std::max(out.sb.sup, std::abs(s));
  }
  return out;
}

double blend_width(double sup_norm, double boundary_slope, double amplification, bool* capped) {
  double delta = 2.0 * (amplification - 1.0) * sup_norm / std::max(1.0, std::abs(boundary_slope));
  const double cap = 10.0 * std::max(1.0, sup_norm);
  *capped = delta > cap;
  return std::min(delta, cap);
}

// Blend attached below a boundary at b (data lives above): value v0 + (y + y^2/(2 delta)) * s
// for y = x - b in (-delta, 0], constant v0 - (delta/2) s below.
C1Fn extend_below(C1Fn data, double b, double v0, double s, double delta) {
  auto val = data.value;
  auto slp = data.slope;
  return {[=](double x) {
            if (x > b) return val(x);
            const double y = x - b;
            if (delta > 0.0 && y > -delta) return v0 + (y + 0.5 * y * y / delta) * s;
            return delta > 0.0 ? v0 - 0.5 * delta * s : v0;
          },
          [=](double x) {
            if (x > b) return slp(x);
            const double y = x - b;
            if (delta > 0.0 && y > -delta) return (1.0 + y / delta) * s;
            return 0.0;
          }};
}

// Mirror image: data lives below b, blend on [b, b+delta), constant above.
C1Fn extend_above(C1Fn data, double b, double v0, double s, double delta) {
  auto val = data.value;
  auto slp = data.slope;
  return {[=](double x) {
            if (x < b) return val(x);
            const double y = x - b;
            if (delta > 0.0 && y < delta) return v0 + (y - 0.5 * y * y / delta) * s;
            return delta > 0.0 ? v0 + 0.5 * delta * s : v0;
          },
          [=](double x) {
            if (x < b) return slp(x);
            const double y = x - b;
            if (delta > 0.0 && y < delta) return (1.0 - y / delta) * s;
            return 0.0;
          }};
}

}  // namespace

HalfLineData HalfLineData::from_fields(Side side, double boundary, C1Fn data, double boundary_value,
                                       double boundary_slope, double sup_norm, SlopeBounds bounds) {
  return HalfLineData{side, boundary, std::move(data), boundary_value, boundary_slope,
                      sup_norm, bounds};
}

HalfLineData HalfLineData::sampled(Side side, double boundary, C1Fn data, double extent, int n) {
  if (extent <= 0.0 || n < 2) throw ParamError("HalfLineData::sampled: bad grid");
  const double far = side == Side::right ? boundary + extent : boundary - extent;
  const Norms norms = scan(data, boundary, far, n);
  HalfLineData out;
  out.side = side;
  out.boundary = boundary;
  out.boundary_value = data.value(boundary);
  out.boundary_slope = data.slope(boundary);
  out.data = std::move(data);
  out.sup_norm = norms.sup;
  out.slope_bounds = norms.sb;
  return out;
}

IntervalData IntervalData::sampled(double lo, double hi, C1Fn data, int n) {
  if (!(lo < hi) || n < 2) throw ParamError("IntervalData::sampled: bad interval");
  const Norms norms = scan(data, lo, hi, n);
  IntervalData out;
  out.lo = lo;
  out.hi = hi;
  out.value_lo = data.value(lo);
  out.slope_lo = data.slope(lo);
  out.value_hi = data.value(hi);
  out.slope_hi = data.slope(hi);
  out.data = std::move(data);
  out.sup_norm = norms.sup;
  out.slope_bounds = norms.sb;
  return out;
}

ExtendedData extend_half_line(const HalfLineData& data, double amplification) {
  if (!(amplification > 1.0)) throw ParamError("extend_half_line: amplification must exceed 1");
  if (!std::isfinite(data.sup_norm) || !std::isfinite(data.boundary_slope))
    throw ParamError("extend_half_line: non-finite data norms");
  ExtendedData out;
  out.amplification = amplification;
  const double delta =
      blend_width(data.sup_norm, data.boundary_slope, amplification, &out.delta_capped);
  if (data.side == Side::right) {
    out.fn = extend_below(data.data, data.boundary, data.boundary_value, data.boundary_slope,
                          delta);
    out.delta_lower = delta;
  } else {
    out.fn = extend_above(data.data, data.boundary, data.boundary_value, data.boundary_slope,
                          delta);
    out.delta_upper = delta;
  }
  return out;
}

ExtendedData extend_interval(const IntervalData& data, double amplification) {
  if (!(amplification > 1.0)) throw ParamError("extend_interval: amplification must exceed 1");
  ExtendedData out;
  out.amplification = amplification;
  bool cap_lo = false, cap_hi = false;
  const double dlo = blend_width(data.sup_norm, data.slope_lo, amplification, &cap_lo);
  const double dhi = blend_width(data.sup_norm, data.slope_hi, amplification, &cap_hi);
  out.delta_capped = cap_lo || cap_hi;
  out.delta_lower = dlo;
  out.delta_upper = dhi;
  C1Fn below = extend_below(data.data, data.lo, data.value_lo, data.slope_lo, dlo);
  out.fn = extend_above(std::move(below), data.hi, data.value_hi, data.slope_hi, dhi);
  return out;
}

ExtendedData whole_line(C1Fn data) {
  ExtendedData out;
  out.fn = std::move(data);
  return out;
}

}  // namespace shockfit::extension
