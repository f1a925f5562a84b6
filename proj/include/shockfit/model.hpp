#pragma once

#include <string>

#include "shockfit/polynomial.hpp"

namespace shockfit::model {

/// Scalar balance law d_t u + d_x f(u) = g(u) with polynomial flux and source.
/// Derivatives come from exact coefficient differentiation.
class ScalarLaw {
 public:
  ScalarLaw(Polynomial flux, Polynomial source, std::string description);

  double f(double u) const { return flux_(u); }
  double fp(double u) const { return flux_d1_(u); }
  double fpp(double u) const { return flux_d2_(u); }
  double g(double u) const { return source_(u); }
  double gp(double u) const { return source_d1_(u); }

  const Polynomial& flux() const { return flux_; }
  const Polynomial& flux_prime() const { return flux_d1_; }
  const Polynomial& flux_second() const { return flux_d2_; }
  const Polynomial& source() const { return source_; }
  const Polynomial& source_prime() const { return source_d1_; }
  const std::string& description() const { return description_; }

 private:
  Polynomial flux_, flux_d1_, flux_d2_;
  Polynomial source_, source_d1_;
  std::string description_;
};

// Built-in families.
Polynomial burgers_flux();            // u^2/2
Polynomial cubic_flux();              // u^3/3
Polynomial linear_flux(double c);     // c*u
Polynomial bistable_source();         // u - u^3
Polynomial linear_source(double beta);  // -beta*u
Polynomial zero_source();

ScalarLaw burgers_bistable();  // the workhorse test law

/// Piecewise-constant traveling-wave data: endstates, speed, initial position.
struct RiemannShockSpec {
  double u_minus = 0.0;
  double u_plus = 0.0;
  double sigma = 0.0;
  double psi0 = 0.0;

  /// Computes sigma from the jump condition; throws DomainError on equal endstates.
  static RiemannShockSpec from_endstates(const ScalarLaw& law, double u_minus, double u_plus,
                                         double psi0);
};

/// Jump-condition speed (f(u_plus) - f(u_minus)) / (u_plus - u_minus).
double shock_speed(const ScalarLaw& law, double u_minus, double u_plus);

/// Integral mean of f' between a and b; equals the secant slope of f.
/// Evaluated by the exact cancellation-free symmetric-sum expansion, so it is
/// well defined and smooth through a == b (where it equals f'(a)).
double slope(const ScalarLaw& law, double a, double b);

/// Signed gap s_f(a, m) - s_f(b, m) at m = tau*a + (1-tau)*b.
/// Strict positivity over tau in [0,1] certifies the chord condition robustly.
double chord_gap(const ScalarLaw& law, double a, double b, double tau);

struct EquilibriumCheck {
  double g_value = 0.0;
  double g_prime = 0.0;
  bool stable = false;  // |g(u)| <= tol and g'(u) < 0
};
EquilibriumCheck check_equilibrium(const ScalarLaw& law, double u, double tol);

struct LaxCheck {
  bool ok = false;
  double left_margin = 0.0;   // f'(u_left) - speed
  double right_margin = 0.0;  // speed - f'(u_right)
};
LaxCheck check_lax(const ScalarLaw& law, double u_left, double u_right, double speed);

struct OleinikCheck {
  bool ok = false;
  double margin = 0.0;  // min over endpoint margins and half chord gaps
  double tau_at_min = 0.0;
  double left_endpoint_margin = 0.0;   // f'(u_minus) - sigma
  double right_endpoint_margin = 0.0;  // sigma - f'(u_plus)
  bool convexity_certified = false;    // f'' single-signed between the endstates
};
/// Endpoint inequalities plus the chord inequality on n_samples interior tau
/// values. The per-tau margin is half the chord gap, which equals the mean of
/// the two secant-to-sigma margins.
OleinikCheck check_oleinik(const ScalarLaw& law, const RiemannShockSpec& shock,
                           int n_samples = 257);

struct AdmissibilityReport {
  bool equilibrium_ok_minus = false, equilibrium_ok_plus = false;
  double equilibrium_margin_minus = 0.0, equilibrium_margin_plus = 0.0;  // tol - |g(u)|
  bool spectral_ok_minus = false, spectral_ok_plus = false;
  double spectral_margin_minus = 0.0, spectral_margin_plus = 0.0;  // -g'(u)
  bool gnl_ok_minus = false, gnl_ok_plus = false;
  double gnl_margin_minus = 0.0, gnl_margin_plus = 0.0;  // |f''(u)|
  OleinikCheck oleinik;
  bool all() const {
    return equilibrium_ok_minus && equilibrium_ok_plus && spectral_ok_minus && spectral_ok_plus &&
           gnl_ok_minus && gnl_ok_plus && oleinik.ok;
  }
};
AdmissibilityReport check_admissibility(const ScalarLaw& law, const RiemannShockSpec& shock,
                                        double eq_tol = 1e-10, int n_samples = 257);

}  // namespace shockfit::model
