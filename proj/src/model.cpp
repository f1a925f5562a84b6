#include "shockfit/model.hpp"

#include <cmath>
#include <utility>

#include "shockfit/errors.hpp"

namespace shockfit::model {

ScalarLaw::ScalarLaw(Polynomial flux, Polynomial source, std::string description)
    : flux_(std::move(flux)),
      flux_d1_(flux_.derivative()),
      flux_d2_(flux_d1_.derivative()),
      source_(std::move(source)),
      source_d1_(source_.derivative()),
      description_(std::move(description)) {}

Polynomial burgers_flux() { return Polynomial{0.0, 0.0, 0.5}; }
Polynomial cubic_flux() { return Polynomial{0.0, 0.0, 0.0, 1.0 / 3.0}; }
Polynomial linear_flux(double c) { return Polynomial{0.0, c}; }
Polynomial bistable_source() { return Polynomial{0.0, 1.0, 0.0, -1.0}; }
Polynomial linear_source(double beta) { return Polynomial{0.0, -beta}; }
Polynomial zero_source() { return Polynomial{}; }

ScalarLaw burgers_bistable() {
  return ScalarLaw(burgers_flux(), bistable_source(), "burgers/bistable");
}

RiemannShockSpec RiemannShockSpec::from_endstates(const ScalarLaw& law, double u_minus,
                                                  double u_plus, double psi0) {
  return RiemannShockSpec{u_minus, u_plus, shock_speed(law, u_minus, u_plus), psi0};
}

double shock_speed(const ScalarLaw& law, double u_minus, double u_plus) {
  if (u_plus == u_minus) throw DomainError("shock_speed: equal endstates");
  return (law.f(u_plus) - law.f(u_minus)) / (u_plus - u_minus);
}

double slope(const ScalarLaw& law, double a, double b) {
  // s_f(a,b) = sum_m f_m * h_{m-1}(a,b) with h_k the complete homogeneous
  // symmetric polynomial; h_k = a*h_{k-1} + b^k, evaluated without subtraction.
  const auto& c = law.flux().coeffs();
  if (c.size() <= 1) return 0.0;
  double s = 0.0;
  double h = 1.0;   // h_0
  double bk = 1.0;  // b^k
  s += c[1] * h;
  for (std::size_t m = 2; m < c.size(); ++m) {
    bk *= b;
    h = a * h + bk;  // h_{m-1}
    s += c[m] * h;
  }
  return s;
}

double chord_gap(const ScalarLaw& law, double a, double b, double tau) {
  if (tau < 0.0 || tau > 1.0) throw ParamError("chord_gap: tau outside [0,1]");
  const double m = tau * a + (1.0 - tau) * b;
  return slope(law, a, m) - slope(law, b, m);
}

EquilibriumCheck check_equilibrium(const ScalarLaw& law, double u, double tol) {
  EquilibriumCheck out;
  out.g_value = law.g(u);
  out.g_prime = law.gp(u);
  out.stable = std::abs(out.g_value) <= tol && out.g_prime < 0.0;
  return out;
}

LaxCheck check_lax(const ScalarLaw& law, double u_left, double u_right, double speed) {
  LaxCheck out;
  out.left_margin = law.fp(u_left) - speed;
  out.right_margin = speed - law.fp(u_right);
  out.ok = out.left_margin > 0.0 && out.right_margin > 0.0;
  return out;
}

OleinikCheck check_oleinik(const ScalarLaw& law, const RiemannShockSpec& shock, int n_samples) {
  if (n_samples < 2) throw ParamError("check_oleinik: n_samples >= 2 required");
  OleinikCheck out;
  out.left_endpoint_margin = law.fp(shock.u_minus) - shock.sigma;
  out.right_endpoint_margin = shock.sigma - law.fp(shock.u_plus);
  out.margin = std::min(out.left_endpoint_margin, out.right_endpoint_margin);
  out.tau_at_min = out.left_endpoint_margin < out.right_endpoint_margin ? 1.0 : 0.0;
  for (int i = 1; i <= n_samples; ++i) {
    const double tau = static_cast<double>(i) / (n_samples + 1);
    const double m = 0.5 * chord_gap(law, shock.u_minus, shock.u_plus, tau);
    if (m < out.margin) {
      out.margin = m;
      out.tau_at_min = tau;
    }
  }
  out.ok = out.margin > 0.0;
  const double lo = std::min(shock.u_minus, shock.u_plus);
  const double hi = std::max(shock.u_minus, shock.u_plus);
  const double f2min = poly_min_on(law.flux_second(), lo, hi);
  const double f2max = poly_max_on(law.flux_second(), lo, hi);
  out.convexity_certified = (f2min > 0.0) || (f2max < 0.0);
  return out;
}

AdmissibilityReport check_admissibility(const ScalarLaw& law, const RiemannShockSpec& shock,
                                        double eq_tol, int n_samples) {
  AdmissibilityReport rep;
  const auto eqm = check_equilibrium(law, shock.u_minus, eq_tol);
  const auto eqp = check_equilibrium(law, shock.u_plus, eq_tol);
  rep.equilibrium_ok_minus = std::abs(eqm.g_value) <= eq_tol;
  rep.equilibrium_ok_plus = std::abs(eqp.g_value) <= eq_tol;
  rep.equilibrium_margin_minus = eq_tol - std::abs(eqm.g_value);
  rep.equilibrium_margin_plus = eq_tol - std::abs(eqp.g_value);
  rep.spectral_ok_minus = eqm.g_prime < 0.0;
  rep.spectral_ok_plus = eqp.g_prime < 0.0;
  rep.spectral_margin_minus = -eqm.g_prime;
  rep.spectral_margin_plus = -eqp.g_prime;
  rep.gnl_margin_minus = std::abs(law.fpp(shock.u_minus));
  rep.gnl_margin_plus = std::abs(law.fpp(shock.u_plus));
  rep.gnl_ok_minus = rep.gnl_margin_minus > 0.0;
  rep.gnl_ok_plus = rep.gnl_margin_plus > 0.0;
  rep.oleinik = check_oleinik(law, shock, n_samples);
  return rep;
}

}  // namespace shockfit::model
