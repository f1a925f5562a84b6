#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "shockfit/model.hpp"

namespace shockfit::spectral {

using Complex = std::complex<double>;

/// (lambda - L_{a,b}) v = F on the line, with L_{a,b} = -a d_x + b. The
/// transport coefficient must be bounded away from zero on the grid and
/// Re(lambda) must exceed sup b.
struct ResolventProblem {
  std::function<double(double)> a;
  std::function<double(double)> b;
  std::function<Complex(double)> forcing;
  Complex lambda;
  double x_max = 0.0;  // grid covers [-x_max, x_max]
  int n = 8193;        // declared node count

  // Measured on a refined scan of the grid by make().
  double sup_b = 0.0;
  double inf_abs_a = 0.0;
  double sup_abs_a = 0.0;
  bool a_positive = true;
  double margin() const { return lambda.real() - sup_b; }

  /// Validates ellipticity and the spectral margin; when x_max is not given it
  /// is sized so the truncated kernel tail is negligible (40 e-folds at rate
  /// margin / sup|a|). Node count is capped at 10000.
  static ResolventProblem make(std::function<double(double)> a, std::function<double(double)> b,
                               std::function<Complex(double)> forcing, Complex lambda,
                               std::optional<double> x_max = std::nullopt,
                               std::optional<int> n = std::nullopt);
};

struct ResolventSolution {
  std::vector<double> x;
  std::vector<Complex> v;
  double h = 0.0;
  double sup_abs() const;
};

/// Marches the explicit integral representation of the solution: a cumulative
/// exponential pass with per-cell Gauss-Legendre quadrature, extended upwind
/// beyond the declared grid so the truncation enters below quadrature level.
/// The direction of integration flips with the sign of a.
ResolventSolution resolvent_solve(const ResolventProblem& prob);

enum class SpectrumClass { resolvent_set, essential_spectrum, eigenvalue };

struct SpectrumVerdict {
  Complex lambda;
  SpectrumClass cls = SpectrumClass::resolvent_set;
  int multiplicity = 0;  // meaningful for eigenvalues
  // Populated for resolvent-set lambda when test data (F, phi) is supplied:
  // half-line solutions in the co-moving frame and the position response.
  std::optional<Complex> psi_hat;
  std::optional<ResolventSolution> v_minus, v_plus;
};

/// Classification of lambda for the linearization about an admissible shock:
/// the eigenvalue 0 (multiplicity 1), the left half-plane up to
/// max(g'(u_minus), g'(u_plus)) as essential spectrum, resolvent set otherwise.
SpectrumVerdict spectrum_classify(const model::ScalarLaw& law,
                                  const model::RiemannShockSpec& shock, Complex lambda);

/// Resolvent-set variant that additionally solves the two constant-coefficient
/// half-line problems for forcing F and returns
/// psi_hat = (phi + jump functional of v(0+-)) / lambda.
SpectrumVerdict spectrum_classify(const model::ScalarLaw& law,
                                  const model::RiemannShockSpec& shock, Complex lambda,
                                  const std::function<Complex(double)>& forcing, Complex phi,
                                  double x_max = 0.0, int n = 4097);

}  // namespace shockfit::spectral
