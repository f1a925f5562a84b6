#include <doctest.h>

#include <cmath>
#include <utility>

#include "shockfit/characteristics.hpp"
#include "shockfit/errors.hpp"
#include "shockfit/harness/fit.hpp"

using namespace shockfit;
using namespace shockfit::characteristics;
using shockfit::model::ScalarLaw;

namespace {

// Independent scalar integrator (midpoint rule at a much finer step) used as
// the oracle for single-curve checks.
double integrate_scalar(double y0, double t_final, double dt,
                        const std::function<double(double)>& f) {
  double y = y0;
  const int n = static_cast<int>(std::llround(t_final / dt));
  for (int i = 0; i < n; ++i) {
    const double k = f(y + 0.5 * dt * f(y));
    y += dt * k;
  }
  return y;
}

extension::ExtendedData whole(C1Fn fn) { return extension::whole_line(std::move(fn)); }

}  // namespace

TEST_CASE("advance_characteristic reproduces linear advection-decay") {
  const ScalarLaw law(model::linear_flux(3.0), model::linear_source(2.0), "advection-decay");
  CharacteristicState s{0.5, 1.0, -0.4};
  const double dt = 1e-3;
  for (int i = 0; i < 1000; ++i) {
    const auto out = advance_characteristic(law, s, dt);
    REQUIRE_FALSE(out.blown_up);
    s = out.state;
  }
  CHECK(s.x == doctest::Approx(0.5 + 3.0).epsilon(1e-10));
  CHECK(s.u == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
  CHECK(s.w == doctest::Approx(-0.4 * std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("gradient Riccati blow-up is detected near the closed-form time") {
  // Burgers without source: w(t) = w0 / (1 + w0 t) blows up at t = 1 for w0 = -1.
  const ScalarLaw law(model::burgers_flux(), model::zero_source(), "burgers");
  CharacteristicState s{0.0, 0.0, -1.0};
  const double dt = 1e-4;
  double t = 0.0;
  bool blew = false;
  for (int i = 0; i < 20000; ++i) {
    const auto out = advance_characteristic(law, s, dt);
    if (out.blown_up) {
      t += out.blow_frac * dt;
      blew = true;
      break;
    }
    s = out.state;
    t += dt;
  }
  REQUIRE(blew);
  CHECK(t == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("bistable relaxation approaches the stable state at its linear rate") {
  const ScalarLaw law(model::burgers_flux(), model::bistable_source(), "bistable");
  CharacteristicState s{0.0, 1.1, 0.0};
  const double dt = 1e-3;
  std::vector<std::pair<double, double>> dist;
  for (int i = 0; i <= 4000; ++i) {
    if (i > 0) s = advance_characteristic(law, s, dt).state;
    dist.emplace_back(i * dt, std::abs(s.u - 1.0));
  }
  const double oracle = integrate_scalar(1.1, 4.0, 1e-5, [&](double u) { return law.g(u); });
  CHECK(s.u == doctest::Approx(oracle).epsilon(1e-8));
  const auto fit = harness::fit_decay_rate(dist, {1.0, 3.0});
  CHECK(fit.rate == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("equilibrium data stays constant") {
  const ScalarLaw law = model::burgers_bistable();
  const auto sol = evolve_smooth(law, whole(constant_fn(-1.0)), 2.0, 33, {-5.0, 5.0}, 1e-3);
  REQUIRE(sol.alive());
  for (double t : {0.0, 1.0, 2.0}) {
    const auto s = sol.sample(t, 0.3);
    CHECK(s.u == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(s.w == doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("linear closed form is reproduced to integrator accuracy") {
  // f = u, g = -2u: u(t, x) = 0.1 e^{-2t} sin(x - t).
  const ScalarLaw law(model::linear_flux(1.0), model::linear_source(2.0), "linear");
  const auto sol =
      evolve_smooth(law, whole(sine_wave(0.1, 1.0, 0.0)), 2.0, 513, {-12.0, 12.0}, 1e-3);
  REQUIRE(sol.alive());
  for (double t : {0.5, 1.0, 2.0}) {
    for (double x : {-3.0, -0.7, 0.0, 1.3, 4.0}) {
      const double exact = 0.1 * std::exp(-2.0 * t) * std::sin(x - t);
      CHECK(std::abs(sol.sample(t, x).u - exact) <= 2e-7);
    }
  }
}

TEST_CASE("fourth-order convergence in the time step") {
  const ScalarLaw law(model::linear_flux(1.0), Polynomial{0.0, -2.0, 0.3}, "nonlinear source");
  auto err_at = [&](double dt) {
    const auto sol = evolve_smooth(law, whole(sine_wave(0.1, 1.0, 0.0)), 1.0, 33, {-6.0, 6.0}, dt,
                                   1 << 20);
    // Compare along one off-center curve against a much finer independent
    // integration of the value equation.
    const auto s = sol.state_on_curve(1.0, 20);
    const double x0 = -6.0 + 12.0 * 20 / 32.0;
    const double u0 = 0.1 * std::sin(x0);
    const double exact = integrate_scalar(u0, 1.0, 1e-6, [&](double u) { return law.g(u); });
    return std::abs(s.u - exact);
  };
  const double e1 = err_at(4e-2);
  const double e2 = err_at(2e-2);
  REQUIRE(e1 > 1e-14);
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("sample reproduces curve nodes and flags out-of-range queries") {
  const ScalarLaw law = model::burgers_bistable();
  const auto sol =
      evolve_smooth(law, whole(sech_bump(0.05, 1.0, 0.0)), 1.0, 65, {-8.0, 8.0}, 1e-3, 10);
  REQUIRE(sol.alive());
  const auto node = sol.node(5, 30);
  const double t = sol.times()[5];
  const auto s = sol.sample(t, node.x);
  CHECK(s.u == doctest::Approx(node.u).epsilon(1e-12));
  CHECK(s.w == doctest::Approx(node.w).epsilon(1e-12));
  CHECK_THROWS_AS((void)sol.sample(t, 100.0), SpanError);
  CHECK_THROWS_AS((void)sol.sample(50.0, 0.0), SpanError);
}

TEST_CASE("sampling error scales with the curve spacing squared") {
  const ScalarLaw law(model::linear_flux(1.0), model::linear_source(2.0), "linear");
  auto max_err = [&](int n_curves) {
    const auto sol =
        evolve_smooth(law, whole(sine_wave(0.1, 1.0, 0.0)), 0.5, n_curves, {-8.0, 8.0}, 1e-3);
    double err = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = -4.0 + 8.0 * i / 200.0;
      const double exact = 0.1 * std::exp(-1.0) * std::sin(x - 0.5);
      err = std::max(err, std::abs(sol.sample(0.5, x).u - exact));
    }
    return err;
  };
  const double gap = 16.0 / 64;
  CHECK(max_err(64) <= gap * gap);  // comfortably quadratic for smooth data
  CHECK(max_err(64) <= 1e-3);
}

TEST_CASE("blow-up shows up as a located event for steep data") {
  // Sharpest seeded slope of 0.5 sin(x/0.25) is -2, so the gradient Riccati
  // equation for sourceless Burgers blows up at 1/2.
  const ScalarLaw law(model::burgers_flux(), model::zero_source(), "burgers");
  const auto sol =
      evolve_smooth(law, whole(sine_wave(0.5, 0.25, 0.0)), 2.0, 129, {-4.0, 4.0}, 1e-4);
  REQUIRE_FALSE(sol.alive());
  CHECK(sol.blowup()->t == doctest::Approx(0.5).epsilon(0.02));
  CHECK_THROWS_AS((void)sol.sample(1.9, 0.0), BlowupError);
}

TEST_CASE("toy blow-up time formulas against direct integration") {
  const auto t1 = toy_blowup_time(1.0, 1.0, -2.0);
  REQUIRE(t1.has_value());
  CHECK(*t1 == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // Independent check: march w' = -w - w^2 until it passes the threshold.
  double w = -2.0, t = 0.0;
  const double dt = 1e-7;
  while (std::abs(w) < 1e6 && t < 1.0) {
    const double wmid = w + 0.5 * dt * (-w - w * w);
    w += dt * (-wmid - wmid * wmid);
    t += dt;
  }
  CHECK(t == doctest::Approx(std::log(2.0)).epsilon(1e-3));

  CHECK_FALSE(toy_blowup_time(1.0, 1.0, -1.0).has_value());
  CHECK_FALSE(toy_blowup_time(1.0, 1.0, 0.5).has_value());
  CHECK_FALSE(toy_blowup_time(0.0, 0.0, -3.0).has_value());
  const auto t0 = toy_blowup_time(2.0, 0.0, -0.25);
  REQUIRE(t0.has_value());
  CHECK(*t0 == doctest::Approx(2.0));
  CHECK_THROWS_AS((void)toy_blowup_time(1.0, -1.0, 0.0), ParamError);
}

TEST_CASE("sup-norm envelope around a stable state") {
  // Basin data small enough that the measured envelope constant stays at 1.05.
  const ScalarLaw law = model::burgers_bistable();
  const auto sol = evolve_smooth(law, whole(offset(sech_bump(0.03, 1.0, 0.0), -1.0)), 5.0, 513,
                                 {-40.0, 40.0}, 1e-3);
  REQUIRE(sol.alive());
  const double sup0 = sol.sup_dist_to(0.0, -1.0, -40.0, 40.0);
  for (double t = 0.5; t <= 5.0; t += 0.25) {
    const double sup = sol.sup_dist_to(t, -1.0, -40.0, 40.0);
    CHECK(sup <= 1.05 * sup0 * std::exp(-2.0 * t));
  }
}

TEST_CASE("asymmetric gradient negative part decays at the dissipation rate") {
  const ScalarLaw law = model::burgers_bistable();
  const auto sol = evolve_smooth(law, whole(offset(sech_bump(0.05, 1.0, 0.0), -1.0)), 5.0, 1025,
                                 {-40.0, 40.0}, 1e-3);
  REQUIRE(sol.alive());
  std::vector<std::pair<double, double>> series;
  for (double t : sol.times()) series.emplace_back(t, sol.sup_neg_part_grad(t, 1.0, -40.0, 40.0));
  const auto fit = harness::fit_decay_rate(series, {1.25, 3.75});
  CHECK(fit.rate <= -2.0 + 0.1);
}

TEST_CASE("frozen-coefficient sup bound holds with machine-level slack") {
  // Constant transport, linear source: the evolution bound e^{g' t} sup(0).
  const ScalarLaw law(model::linear_flux(0.7), model::linear_source(1.5), "frozen");
  const auto sol =
      evolve_smooth(law, whole(sine_wave(0.2, 1.0, 0.3)), 5.0, 513, {-15.0, 15.0}, 1e-3);
  REQUIRE(sol.alive());
  const double sup0 = sol.sup_dist_to(0.0, 0.0, -15.0, 15.0);
  for (double t : sol.times()) {
    const double sup = sol.sup_dist_to(t, 0.0, -15.0, 15.0);
    CHECK(sup <= std::exp(-1.5 * t) * sup0 * (1.0 + 1e-8));
  }
}

TEST_CASE("curve ordering is preserved while alive") {
  const ScalarLaw law = model::burgers_bistable();
  const auto sol =
      evolve_smooth(law, whole(sech_bump(0.05, 1.0, 0.0)), 3.0, 257, {-20.0, 20.0}, 1e-3);
  REQUIRE(sol.alive());
  for (std::size_t ti = 0; ti < sol.times().size(); ti += 30)
    for (int c = 0; c + 1 < sol.curve_count(); ++c)
      CHECK(sol.node(static_cast<int>(ti), c).x < sol.node(static_cast<int>(ti), c + 1).x);
  CHECK(sol.max_gap() > 0.0);
}

TEST_CASE("source ODE residual along curves stays at dense-output accuracy") {
  const ScalarLaw law = model::burgers_bistable();
  const auto sol =
      evolve_smooth(law, whole(sech_bump(0.05, 1.0, 0.0)), 2.0, 65, {-15.0, 15.0}, 1e-3, 10);
  REQUIRE(sol.alive());
  const double h = 1e-4;
  for (double t : {0.5, 1.0, 1.5}) {
    for (int c : {10, 32, 50}) {
      const auto a = sol.state_on_curve(t - h, c);
      const auto b = sol.state_on_curve(t + h, c);
      const auto mid = sol.state_on_curve(t, c);
      const double dudt = (b.u - a.u) / (2 * h);
      CHECK(std::abs(dudt - law.g(mid.u)) <= 1e-6);
    }
  }
}
