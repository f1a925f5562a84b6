#include "shockfit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shockfit/errors.hpp"

namespace shockfit::spectral {

namespace {

constexpr double kGaussNode[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                  0.5384693101056831, 0.9061798459386640};
constexpr double kGaussWeight[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                    0.4786286704993665, 0.2369268850561891};

template <class Fn>
auto gauss5(const Fn& f, double lo, double hi) -> decltype(f(lo)) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  decltype(f(lo)) acc{};
  for (int k = 0; k < 5; ++k) acc += kGaussWeight[k] * f(mid + half * kGaussNode[k]);
  return half * acc;
}

struct Scan {
  double sup_b = -std::numeric_limits<double>::infinity();
  double inf_abs_a = std::numeric_limits<double>::infinity();
  double sup_abs_a = 0.0;
  bool a_positive = true;
};

Scan scan_coeffs(const std::function<double(double)>& a, const std::function<double(double)>& b,
                 double x_lo, double x_hi, int n) {
  Scan s;
  bool saw_pos = false, saw_neg = false;
  for (int i = 0; i < n; ++i) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / (n - 1);
    const double av = a(x);
    s.sup_b = std::max(s.sup_b, b(x));
    s.inf_abs_a = std::min(s.inf_abs_a, std::abs(av));
    s.sup_abs_a = std::max(s.sup_abs_a, std::abs(av));
    (av > 0 ? saw_pos : saw_neg) = true;
  }
  if (saw_pos && saw_neg) s.inf_abs_a = 0.0;
  s.a_positive = saw_pos;
  return s;
}

// March of v' = c v + F/a with c = (b - lambda)/a for positive a, from the
// padded left end rightward. Per-cell transfer factor and forcing load are
// integrated by Gauss-Legendre; the factor magnitudes stay below one, so the
// pass is overflow-free.
std::vector<Complex> march_positive(const ResolventProblem& prob, double x_start, double h,
                                    int total_nodes) {
  const auto c = [&](double z) -> Complex {
    return (prob.b(z) - prob.lambda) / prob.a(z);
  };
  const auto load = [&](double y) -> Complex { return prob.forcing(y) / prob.a(y); };
  std::vector<Complex> v(total_nodes);
  v[0] = Complex{0.0, 0.0};
  for (int i = 0; i + 1 < total_nodes; ++i) {
    const double xl = x_start + i * h, xr = xl + h;
    const Complex mu = gauss5(c, xl, xr);
    const Complex phi = std::exp(mu);
    const auto integrand = [&](double y) -> Complex {
      return std::exp(gauss5(c, y, xr)) * load(y);
    };
    v[i + 1] = phi * v[i] + gauss5(integrand, xl, xr);
  }
  return v;
}

}  // namespace

double ResolventSolution::sup_abs() const {
  double s = 0.0;
  for (const Complex& z : v) s = std::max(s, std::abs(z));
  return s;
}

ResolventProblem ResolventProblem::make(std::function<double(double)> a,
                                        std::function<double(double)> b,
                                        std::function<Complex(double)> forcing, Complex lambda,
                                        std::optional<double> x_max, std::optional<int> n) {
  ResolventProblem p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.forcing = std::move(forcing);
  p.lambda = lambda;
  p.n = std::clamp(n.value_or(8193), 33, 10000);

  const double probe = x_max.value_or(50.0);
  Scan s = scan_coeffs(p.a, p.b, -probe, probe, 4 * p.n);
  if (s.inf_abs_a <= 0.0) throw EllipticityError("resolvent: transport coefficient vanishes");
  if (lambda.real() <= s.sup_b)
    throw SpectralMarginError("resolvent: Re(lambda)=" + std::to_string(lambda.real()) +
                              " does not exceed sup b=" + std::to_string(s.sup_b));
  p.x_max = x_max.value_or(40.0 * s.sup_abs_a / (lambda.real() - s.sup_b));

  // Second pass over the grid plus the upwind pad actually used by the march.
  const double pad = 40.0 * s.sup_abs_a / (lambda.real() - s.sup_b);
  s = scan_coeffs(p.a, p.b, -p.x_max - pad, p.x_max + pad, 4 * p.n);
  if (s.inf_abs_a <= 0.0)
    throw EllipticityError("resolvent: transport coefficient vanishes in the padded window");
  if (lambda.real() <= s.sup_b)
    throw SpectralMarginError("resolvent: spectral margin lost in the padded window");
  p.sup_b = s.sup_b;
  p.inf_abs_a = s.inf_abs_a;
  p.sup_abs_a = s.sup_abs_a;
  p.a_positive = s.a_positive;
  return p;
}

ResolventSolution resolvent_solve(const ResolventProblem& prob) {
  if (prob.inf_abs_a <= 0.0) throw EllipticityError("resolvent_solve: unvalidated problem");
  if (prob.margin() <= 0.0) throw SpectralMarginError("resolvent_solve: nonpositive margin");

  ResolventSolution out;
  const int n = prob.n;
  out.h = 2.0 * prob.x_max / (n - 1);
  out.x.resize(n);
  for (int i = 0; i < n; ++i) out.x[i] = -prob.x_max + i * out.h;

  const double pad_width = 40.0 * prob.sup_abs_a / prob.margin();
  const int pad = std::min(200000, static_cast<int>(std::ceil(pad_width / out.h)));
  const int total = n + pad;

  if (prob.a_positive) {
    const double x_start = -prob.x_max - pad * out.h;
    std::vector<Complex> v = march_positive(prob, x_start, out.h, total);
    out.v.assign(v.end() - n, v.end());
  } else {
    // Reflect x -> -x: the reflected transport coefficient is positive and the
    // solution of the reflected problem reads backward.
    ResolventProblem r = prob;
    auto a0 = prob.a;
    auto b0 = prob.b;
    auto f0 = prob.forcing;
    r.a = [a0](double x) { return -a0(-x); };
    r.b = [b0](double x) { return b0(-x); };
    r.forcing = [f0](double x) { return f0(-x); };
    const double x_start = -prob.x_max - pad * out.h;
    std::vector<Complex> v = march_positive(r, x_start, out.h, total);
    out.v.resize(n);
    for (int i = 0; i < n; ++i) out.v[i] = v[total - 1 - i];
  }
  return out;
}

SpectrumVerdict spectrum_classify(const model::ScalarLaw& law,
                                  const model::RiemannShockSpec& shock, Complex lambda) {
  const auto adm = model::check_admissibility(law, shock);
  if (!adm.oleinik.ok || !adm.spectral_ok_minus || !adm.spectral_ok_plus)
    throw DomainError("spectrum_classify: shock is not strictly admissible and dissipative");
  SpectrumVerdict out;
  out.lambda = lambda;
  const double ess_edge = std::max(law.gp(shock.u_minus), law.gp(shock.u_plus));
  if (std::abs(lambda) <= 1e-14) {
    out.cls = SpectrumClass::eigenvalue;
    out.multiplicity = 1;
  } else if (lambda.real() <= ess_edge) {
    out.cls = SpectrumClass::essential_spectrum;
  } else {
    out.cls = SpectrumClass::resolvent_set;
  }
  return out;
}

SpectrumVerdict spectrum_classify(const model::ScalarLaw& law,
                                  const model::RiemannShockSpec& shock, Complex lambda,
                                  const std::function<Complex(double)>& forcing, Complex phi,
                                  double x_max, int n) {
  SpectrumVerdict out = spectrum_classify(law, shock, lambda);
  if (out.cls != SpectrumClass::resolvent_set) return out;

  // Co-moving frame constants; the Lax inequalities give a_plus < 0 < a_minus,
  // so each half-line problem is solved from its own infinity toward 0.
  const double a_minus = law.fp(shock.u_minus) - shock.sigma;
  const double a_plus = law.fp(shock.u_plus) - shock.sigma;
  const double b_minus = law.gp(shock.u_minus);
  const double b_plus = law.gp(shock.u_plus);
  if (n % 2 == 0) ++n;  // keep a node exactly at the interface

  auto solve_const = [&](double a, double b) {
    auto prob = ResolventProblem::make([a](double) { return a; }, [b](double) { return b; },
                                       forcing, lambda,
                                       x_max > 0.0 ? std::optional<double>(x_max) : std::nullopt,
                                       n);
    return resolvent_solve(prob);
  };
  const ResolventSolution full_minus = solve_const(a_minus, b_minus);
  const ResolventSolution full_plus = solve_const(a_plus, b_plus);

  const int mid_m = static_cast<int>(full_minus.x.size()) / 2;
  const int mid_p = static_cast<int>(full_plus.x.size()) / 2;
  const Complex v0_minus = full_minus.v[mid_m];
  const Complex v0_plus = full_plus.v[mid_p];

  ResolventSolution vm, vp;
  vm.h = full_minus.h;
  vm.x.assign(full_minus.x.begin(), full_minus.x.begin() + mid_m + 1);
  vm.v.assign(full_minus.v.begin(), full_minus.v.begin() + mid_m + 1);
  vp.h = full_plus.h;
  vp.x.assign(full_plus.x.begin() + mid_p, full_plus.x.end());
  vp.v.assign(full_plus.v.begin() + mid_p, full_plus.v.end());
  out.v_minus = std::move(vm);
  out.v_plus = std::move(vp);

  const double jump = shock.u_plus - shock.u_minus;
  out.psi_hat = (phi + (a_plus * v0_plus - a_minus * v0_minus) / jump) / lambda;
  return out;
}

}  // namespace shockfit::spectral
