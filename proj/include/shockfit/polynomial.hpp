#pragma once

#include <initializer_list>
#include <vector>

namespace shockfit {

/// Real polynomial with coefficients in ascending powers.
/// Differentiation is exact (coefficient-wise), never numerical.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  double operator()(double x) const;
  Polynomial derivative() const;
  int degree() const;  // -1 for the zero polynomial
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }

  /// Real roots inside [lo, hi], ascending, deduplicated.
  std::vector<double> roots_in(double lo, double hi) const;

 private:
  std::vector<double> c_;  // ascending powers, trailing zeros trimmed
};

/// Extrema of p over [lo, hi] (endpoints plus interior critical points).
double poly_min_on(const Polynomial& p, double lo, double hi);
double poly_max_on(const Polynomial& p, double lo, double hi);
double poly_max_abs_on(const Polynomial& p, double lo, double hi);

}  // namespace shockfit
