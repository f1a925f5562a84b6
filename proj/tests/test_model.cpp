#include <doctest.h>

#include <cmath>
#include <random>

#include "shockfit/errors.hpp"
#include "shockfit/model.hpp"

using namespace shockfit;
using namespace shockfit::model;

namespace {

ScalarLaw cubic_zero() { return ScalarLaw(cubic_flux(), zero_source(), "cubic"); }

// Independent quadrature oracle for the integral mean of f'.
double slope_by_quadrature(const ScalarLaw& law, double a, double b) {
  const int n = 20001;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tau = (i + 0.5) / n;
    acc += law.fp(a + tau * (b - a));
  }
  return acc / n;
}

}  // namespace

TEST_CASE("law derivatives agree with central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0), point(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> fc(5), gc(4);
    for (double& c : fc) c = coeff(rng);
    for (double& c : gc) c = coeff(rng);
    const ScalarLaw law(Polynomial(fc), Polynomial(gc), "random");
    for (int k = 0; k < 10; ++k) {
      const double u = point(rng);
      const double h = 1e-5 * (1.0 + std::abs(u));
      const double fp_fd = (law.f(u + h) - law.f(u - h)) / (2 * h);
      const double fpp_fd = (law.fp(u + h) - law.fp(u - h)) / (2 * h);
      const double gp_fd = (law.g(u + h) - law.g(u - h)) / (2 * h);
      const double scale = 1.0 + std::abs(fp_fd) + std::abs(fpp_fd) + std::abs(gp_fd);
      CHECK(std::abs(law.fp(u) - fp_fd) <= 1e-6 * scale);
      CHECK(std::abs(law.fpp(u) - fpp_fd) <= 1e-6 * scale);
      CHECK(std::abs(law.gp(u) - gp_fd) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("shock_speed divided differences") {
  const ScalarLaw burgers = burgers_bistable();
  CHECK(shock_speed(burgers, 1.0, -1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(shock_speed(burgers, 2.0, 0.0) == doctest::Approx(1.0));
  CHECK(shock_speed(cubic_zero(), 1.0, -1.0) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS((void)shock_speed(burgers, 0.5, 0.5), DomainError);
}

TEST_CASE("RiemannShockSpec computes the jump speed") {
  const ScalarLaw law = burgers_bistable();
  const auto shock = RiemannShockSpec::from_endstates(law, 1.0, -1.0, 2.0);
  const double dd = (law.f(shock.u_plus) - law.f(shock.u_minus)) / (shock.u_plus - shock.u_minus);
  CHECK(std::abs(shock.sigma - dd) <= 1e-12);
  CHECK(shock.psi0 == 2.0);
}

TEST_CASE("slope values and degenerate arguments") {
  const ScalarLaw burgers = burgers_bistable();
  CHECK(slope(burgers, 1.0, -1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(slope(burgers, 2.0, 2.0) == doctest::Approx(2.0));
  CHECK(slope(cubic_zero(), 0.0, 3.0) == doctest::Approx(3.0));
}

TEST_CASE("slope equals divided difference and quadrature away from the diagonal") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5), point(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> fc(6);
    for (double& c : fc) c = coeff(rng);
    const ScalarLaw law(Polynomial(fc), zero_source(), "random");
    const double a = point(rng);
    double b = point(rng);
    if (std::abs(b - a) < 1e-6) b += 0.5;
    const double dd = (law.f(b) - law.f(a)) / (b - a);
    CHECK(std::abs(slope(law, a, b) - dd) <= 1e-10 * (1.0 + std::abs(dd)));
    CHECK(std::abs(slope(law, a, b) - slope_by_quadrature(law, a, b)) <= 1e-7);
    CHECK(std::abs(slope(law, a, b) - slope(law, b, a)) <= 1e-12 * (1.0 + std::abs(dd)));
  }
}

TEST_CASE("slope is continuous through nearly equal arguments") {
  const ScalarLaw law(Polynomial{0.0, 1.0, 0.5, -0.25}, zero_source(), "mixed");
  const double at = slope(law, 1.0, 1.0);
  CHECK(std::abs(slope(law, 1.0, 1.0 + 1e-9) - at) <= 1e-8);
  CHECK(std::abs(slope(law, 1.0, 1.0 - 1e-9) - at) <= 1e-8);
  CHECK(at == doctest::Approx(law.fp(1.0)));
}

TEST_CASE("chord_gap examples") {
  const ScalarLaw burgers = burgers_bistable();
  CHECK(chord_gap(burgers, 1.0, -1.0, 0.5) == doctest::Approx(1.0));
  CHECK(chord_gap(burgers, 0.7, 0.7, 0.3) == doctest::Approx(0.0).epsilon(1e-14));
  // Tau = 0 degenerates the second argument to b, so the gap is s_f(a,b) - f'(b).
  const ScalarLaw cubic = cubic_zero();
  CHECK(chord_gap(cubic, 1.0, -1.0, 0.0) == doctest::Approx(1.0 / 3.0 - 1.0));
  CHECK_THROWS_AS((void)chord_gap(burgers, 0.0, 1.0, 1.5), ParamError);
}

TEST_CASE("check_equilibrium classifies bistable rest points") {
  const ScalarLaw law = burgers_bistable();
  const auto stable = check_equilibrium(law, 1.0, 1e-10);
  CHECK(stable.g_value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(stable.g_prime == doctest::Approx(-2.0));
  CHECK(stable.stable);
  const auto unstable = check_equilibrium(law, 0.0, 1e-10);
  CHECK(unstable.g_prime == doctest::Approx(1.0));
  CHECK_FALSE(unstable.stable);
  const ScalarLaw degenerate(burgers_flux(), zero_source(), "degenerate");
  const auto flat = check_equilibrium(degenerate, 5.0, 1e-10);
  CHECK(flat.g_value == 0.0);
  CHECK(flat.g_prime == 0.0);
  CHECK_FALSE(flat.stable);
}

TEST_CASE("check_oleinik on the three reference configurations") {
  const ScalarLaw burgers = burgers_bistable();
  const auto entropic = check_oleinik(
      burgers, RiemannShockSpec::from_endstates(burgers, 1.0, -1.0, 0.0));
  CHECK(entropic.ok);
  CHECK(entropic.margin == doctest::Approx(0.5).epsilon(1e-9));
  // The per-tau margin is half the chord gap; for this symmetric shock it is
  // 0.5 uniformly, in particular at tau = 1/2.
  CHECK(0.5 * chord_gap(burgers, 1.0, -1.0, 0.5) == doctest::Approx(entropic.margin));
  CHECK(entropic.convexity_certified);

  const auto rarefaction = check_oleinik(
      burgers, RiemannShockSpec::from_endstates(burgers, -1.0, 1.0, 0.0));
  CHECK_FALSE(rarefaction.ok);

  const ScalarLaw cubic = cubic_zero();
  const auto sonic = check_oleinik(cubic, RiemannShockSpec::from_endstates(cubic, 1.0, -1.0, 0.0));
  CHECK_FALSE(sonic.ok);
  CHECK(sonic.right_endpoint_margin == doctest::Approx(1.0 / 3.0 - 1.0));
}

TEST_CASE("oleinik passes for random strictly convex fluxes with decreasing states") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> lin(-1.0, 1.0), quad(0.2, 2.0), states(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const ScalarLaw law(Polynomial{lin(rng), lin(rng), quad(rng)}, zero_source(), "convex");
    double um = states(rng), up = states(rng);
    if (um < up) std::swap(um, up);
    if (um - up < 0.1) um += 0.2;
    const auto check = check_oleinik(law, RiemannShockSpec::from_endstates(law, um, up, 0.0));
    CHECK(check.ok);
    CHECK(check.margin > 0.0);
    CHECK(check.convexity_certified);
  }
}

TEST_CASE("check_lax margins and the mean-value sandwich") {
  const ScalarLaw burgers = burgers_bistable();
  const auto symmetric = check_lax(burgers, 1.0, -1.0, 0.0);
  CHECK(symmetric.ok);
  CHECK(symmetric.left_margin == doctest::Approx(1.0));
  CHECK(symmetric.right_margin == doctest::Approx(1.0));

  const auto narrow = check_lax(burgers, 1.0, 0.8, 0.9);
  CHECK(narrow.ok);
  CHECK(narrow.left_margin == doctest::Approx(0.1));
  CHECK(narrow.right_margin == doctest::Approx(0.1));

  CHECK_FALSE(check_lax(burgers, -1.0, 1.0, 0.0).ok);

  // Whenever the Lax check passes with the jump speed, the speed lies strictly
  // between the endpoint characteristic speeds.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0), states(-2.0, 2.0);
  int passing = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> fc(5);
    for (double& c : fc) c = coeff(rng);
    const ScalarLaw law(Polynomial(fc), zero_source(), "random");
    const double ul = states(rng), ur = states(rng);
    if (ul == ur) continue;
    const double s = shock_speed(law, ul, ur);
    const auto lax = check_lax(law, ul, ur, s);
    if (lax.ok) {
      ++passing;
      CHECK(law.fp(ur) < s);
      CHECK(s < law.fp(ul));
    }
  }
  CHECK(passing > 10);
}

TEST_CASE("admissibility report flags and margins are consistent") {
  const ScalarLaw law = burgers_bistable();
  const auto rep = check_admissibility(law, RiemannShockSpec::from_endstates(law, 1.0, -1.0, 0.0));
  CHECK(rep.all());
  CHECK(rep.spectral_margin_minus == doctest::Approx(2.0));
  CHECK(rep.spectral_margin_plus == doctest::Approx(2.0));
  CHECK(rep.gnl_margin_minus > 0.0);
  CHECK(rep.equilibrium_margin_minus > 0.0);
  CHECK(rep.oleinik.margin > 0.0);

  const ScalarLaw unstable(burgers_flux(), Polynomial{0.0, 1.0}, "antidissipative");
  const auto bad = check_admissibility(unstable,
                                       RiemannShockSpec::from_endstates(unstable, 1.0, -1.0, 0.0));
  CHECK_FALSE(bad.spectral_ok_minus);
  CHECK_FALSE(bad.all());
}
