#include <doctest.h>

#include <cmath>
#include <memory>

#include "shockfit/errors.hpp"
#include "shockfit/shocktracker.hpp"

using namespace shockfit;
using namespace shockfit::shocktracker;
namespace chars = shockfit::characteristics;
namespace ext = shockfit::extension;
using shockfit::model::ScalarLaw;

namespace {

std::shared_ptr<const chars::SmoothSolution> constant_fan(const ScalarLaw& law, double value,
                                                          double t_final, double dt,
                                                          std::pair<double, double> span) {
  return std::make_shared<chars::SmoothSolution>(
      chars::evolve_smooth(law, ext::whole_line(constant_fn(value)), t_final, 65, span, dt));
}

// Independent scalar relaxation oracle (finer midpoint scheme).
std::vector<double> relax_series(const ScalarLaw& law, double u0, double t_final, double dt) {
  std::vector<double> out{u0};
  double u = u0;
  const int n = static_cast<int>(std::llround(t_final / dt));
  for (int i = 0; i < n; ++i) {
    const double um = u + 0.5 * dt * law.g(u);
    u += dt * law.g(um);
    out.push_back(u);
  }
  return out;
}

}  // namespace

TEST_CASE("unperturbed symmetric shock stays put") {
  const ScalarLaw law = model::burgers_bistable();
  const auto left = constant_fan(law, 1.0, 3.0, 1e-3, {-8.0, 8.0});
  const auto right = constant_fan(law, -1.0, 3.0, 1e-3, {-8.0, 8.0});
  const ShockPath path = track_shock(law, *left, *right, 0.25, 3.0, 1e-3);
  CHECK_FALSE(path.valid_until.has_value());
  for (std::size_t i = 0; i < path.size(); i += 500) {
    CHECK(path.psi[i] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(path.psi_prime[i] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(path.lax_left[i] == doctest::Approx(1.0));
    CHECK(path.lax_right[i] == doctest::Approx(1.0));
  }
}

TEST_CASE("relaxing left state drives the shock at half its excess") {
  // Left fan is spatially constant and solves u' = g(u) from 1.1; the jump
  // condition gives psi'(t) = (u_left(t) - 1) / 2 for Burgers against -1.
  const ScalarLaw law = model::burgers_bistable();
  const double t_final = 2.0, dt = 1e-3;
  const auto left = constant_fan(law, 1.1, t_final, dt, {-6.0, 6.0});
  const auto right = constant_fan(law, -1.0, t_final, dt, {-6.0, 6.0});
  const ShockPath path = track_shock(law, *left, *right, 0.0, t_final, dt);

  const auto u_orc = relax_series(law, 1.1, t_final, dt / 20.0);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < u_orc.size(); ++i)
    integral += 0.5 * (dt / 20.0) * ((u_orc[i] - 1.0) / 2.0 + (u_orc[i + 1] - 1.0) / 2.0);

  CHECK(path.psi.back() == doctest::Approx(integral).epsilon(1e-7));
  const double speed_mid = path.psi_prime_at(1.0);
  const double u_mid = u_orc[u_orc.size() / 2];
  CHECK(speed_mid == doctest::Approx((u_mid - 1.0) / 2.0).epsilon(1e-6));
}

TEST_CASE("linear relaxation yields the closed-form path and phase") {
  const double beta = 2.0, delta = 0.1, t_final = 4.0, dt = 1e-3;
  const ScalarLaw law_left(model::burgers_flux(), Polynomial{beta, -beta}, "toward 1");
  const ScalarLaw law_right(model::burgers_flux(), Polynomial{-beta, -beta}, "toward -1");
  const ScalarLaw law_flux(model::burgers_flux(), model::zero_source(), "flux only");
  const auto left = constant_fan(law_left, 1.0 + delta, t_final, dt, {-10.0, 10.0});
  const auto right = constant_fan(law_right, -1.0, t_final, dt, {-10.0, 10.0});
  const ShockPath path = track_shock(law_flux, *left, *right, 0.5, t_final, dt);
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const double exact = 0.5 + delta / (2 * beta) * (1.0 - std::exp(-beta * t));
    CHECK(path.psi_at(t) == doctest::Approx(exact).epsilon(1e-9));
  }
  const PhaseResult phase = asymptotic_phase(path, 0.0, -beta);
  CHECK(phase.psi_infty - 0.5 == doctest::Approx(delta / (2 * beta)).epsilon(1e-4));
  CHECK(phase.tail_bound ==
        doctest::Approx(delta / 2 * std::exp(-beta * t_final) / beta).epsilon(1e-3));
}

TEST_CASE("jump condition residual vanishes at every node") {
  const ScalarLaw law = model::burgers_bistable();
  const auto left = constant_fan(law, 1.05, 2.0, 1e-3, {-6.0, 6.0});
  const auto right = constant_fan(law, -0.97, 2.0, 1e-3, {-6.0, 6.0});
  const ShockPath path = track_shock(law, *left, *right, 0.0, 2.0, 1e-3);
  for (std::size_t i = 0; i < path.size(); i += 100) {
    const double jump = path.u_right[i] - path.u_left[i];
    const double res = std::abs(path.psi_prime[i] * jump -
                                (law.f(path.u_right[i]) - law.f(path.u_left[i])));
    CHECK(res <= 1e-8 * (1.0 + std::abs(jump)));
    // The jump never changes sign along a valid path.
    CHECK(jump < 0.0);
  }
}

TEST_CASE("lax margin failure truncates the path") {
  // Rarefaction-ordered states violate the inequalities immediately.
  const ScalarLaw law(model::burgers_flux(), model::zero_source(), "burgers");
  const auto left = constant_fan(law, -1.0, 1.0, 1e-3, {-6.0, 6.0});
  const auto right = constant_fan(law, 1.0, 1.0, 1e-3, {-6.0, 6.0});
  const ShockPath path = track_shock(law, *left, *right, 0.0, 1.0, 1e-3);
  REQUIRE(path.valid_until.has_value());
  CHECK(*path.valid_until == 0.0);
  CHECK(path.size() == 1);
}

TEST_CASE("glued evaluation selects pieces by position and returns pairs on the path") {
  const ScalarLaw law = model::burgers_bistable();
  const auto left = constant_fan(law, 1.0, 2.0, 1e-3, {-8.0, 8.0});
  const auto right = constant_fan(law, -1.0, 2.0, 1e-3, {-8.0, 8.0});
  ShockPath path = track_shock(law, *left, *right, 0.25, 2.0, 1e-3);
  const GluedSolution glued = glue(left, right, std::move(path));

  for (double t : {0.0, 1.0, 2.0}) {
    CHECK(glued.eval(t, -1.0).u() == doctest::Approx(1.0));
    CHECK(glued.eval(t, 3.0).u() == doctest::Approx(-1.0));
    const auto at = glued.eval(t, glued.main_path().psi_at(t));
    CHECK(at.at_shock);
    CHECK(at.u_left == doctest::Approx(1.0));
    CHECK(at.u_right == doctest::Approx(-1.0));
    CHECK(at.u_left > at.u_right);
  }
}

TEST_CASE("phase of an unperturbed path is its initial position") {
  const ScalarLaw law = model::burgers_bistable();
  const auto left = constant_fan(law, 1.0, 1.0, 1e-3, {-6.0, 6.0});
  const auto right = constant_fan(law, -1.0, 1.0, 1e-3, {-6.0, 6.0});
  const ShockPath path = track_shock(law, *left, *right, -0.7, 1.0, 1e-3);
  const PhaseResult phase = asymptotic_phase(path, 0.0, -2.0);
  CHECK(phase.psi_infty == -0.7);
  CHECK(phase.tail_bound == 0.0);
}

TEST_CASE("asymptotic_phase rejects non-decaying drift") {
  // A path drifting at constant speed has |psi' - sigma| constant.
  const ScalarLaw law(model::burgers_flux(), model::zero_source(), "burgers");
  const auto left = constant_fan(law, 1.0, 2.0, 1e-3, {-8.0, 8.0});
  const auto right = constant_fan(law, -0.5, 2.0, 1e-3, {-8.0, 8.0});
  const ShockPath path = track_shock(law, *left, *right, 0.0, 2.0, 1e-3);
  CHECK_THROWS_AS((void)asymptotic_phase(path, 0.0, -1.0), FitError);
}

TEST_CASE("frozen-source two-shock merge at the closed-form time") {
  const ScalarLaw law(model::burgers_flux(), model::zero_source(), "frozen");
  const double t_final = 1.5, dt = 1e-3;
  const std::pair<double, double> span{-8.0, 8.0};
  const auto left = constant_fan(law, 1.0, t_final, dt, span);
  const auto middle = constant_fan(law, 0.8, t_final, dt, span);
  const auto right = constant_fan(law, -1.0, t_final, dt, span);
  const GluedSolution glued =
      two_shock_evolution(law, left, middle, right, -1.0, 0.0, t_final, dt);
  REQUIRE(glued.merge().has_value());
  // Interface speeds 0.9 and -0.1 close the unit gap at rate 1.
  CHECK(glued.merge()->t_star == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(glued.merge()->x_star == doctest::Approx(-0.1).epsilon(1e-2));

  // Before the merge the middle state shows between the two paths.
  const auto mid = glued.eval(0.5, -0.3);
  CHECK(mid.u() == doctest::Approx(0.8));
  // After the merge only the outer states remain.
  CHECK(glued.eval(1.2, glued.main_path().psi_at(1.2) - 0.5).u() == doctest::Approx(1.0));
  CHECK(glued.eval(1.2, glued.main_path().psi_at(1.2) + 0.5).u() == doctest::Approx(-1.0));

  // The surviving path is continuous at the merge; its slope jumps by
  // s_f(u_l, u_r) - s_f(u_c, u_r).
  const double ts = glued.merge()->t_star;
  CHECK(glued.secondary_path() != nullptr);
  CHECK(std::abs(glued.secondary_path()->psi.back() - glued.merge()->x_star) <= 1e-6);
  const double before = glued.main_path().psi_prime_at(ts - 5 * dt);
  const double after = glued.main_path().psi_prime_at(ts + 5 * dt);
  const double expected_jump = model::slope(law, 1.0, -1.0) - model::slope(law, 0.8, -1.0);
  CHECK(after - before == doctest::Approx(expected_jump).epsilon(1e-6));
}

TEST_CASE("merge time shrinks to zero with the initial gap") {
  const ScalarLaw law(model::burgers_flux(), model::zero_source(), "frozen");
  const std::pair<double, double> span{-6.0, 6.0};
  double prev = 1e9;
  for (double gap : {0.5, 0.25, 0.1}) {
    const auto left = constant_fan(law, 1.0, 1.0, 1e-3, span);
    const auto middle = constant_fan(law, 0.8, 1.0, 1e-3, span);
    const auto right = constant_fan(law, -1.0, 1.0, 1e-3, span);
    const GluedSolution glued =
        two_shock_evolution(law, left, middle, right, -gap, 0.0, 1.0, 1e-3);
    REQUIRE(glued.merge().has_value());
    CHECK(glued.merge()->t_star == doctest::Approx(gap).epsilon(1e-2));
    CHECK(glued.merge()->t_star < prev);
    prev = glued.merge()->t_star;
  }
}

TEST_CASE("bistable two-shock merge keeps Lax margins and the speed sandwich") {
  const ScalarLaw law = model::burgers_bistable();
  const double t_final = 1.5, dt = 1e-3;
  const std::pair<double, double> span{-8.0, 8.0};
  const auto left = constant_fan(law, 1.0, t_final, dt, span);
  const auto middle = constant_fan(law, 0.8, t_final, dt, span);
  const auto right = constant_fan(law, -1.0, t_final, dt, span);
  const GluedSolution glued =
      two_shock_evolution(law, left, middle, right, -1.0, 0.0, t_final, dt);
  REQUIRE(glued.merge().has_value());
  // The gap closes at rate (u_l - u_r)/2 = 1 regardless of the middle state.
  CHECK(glued.merge()->t_star == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(glued.main_path().min_lax_margin() > 0.0);

  // Endstates are unperturbed, so the merged speed sits strictly inside the
  // characteristic sandwich right away.
  const auto& main = glued.main_path();
  for (std::size_t i = 0; i < main.size(); ++i) {
    if (main.times[i] <= glued.merge()->t_star) continue;
    CHECK(main.psi_prime[i] < law.fp(1.0));
    CHECK(main.psi_prime[i] > law.fp(-1.0));
  }
}

TEST_CASE("no merge before the horizon is reported as such") {
  const ScalarLaw law(model::burgers_flux(), model::zero_source(), "frozen");
  const std::pair<double, double> span{-8.0, 8.0};
  const auto left = constant_fan(law, 1.0, 0.5, 1e-3, span);
  const auto middle = constant_fan(law, 0.8, 0.5, 1e-3, span);
  const auto right = constant_fan(law, -1.0, 0.5, 1e-3, span);
  const GluedSolution glued =
      two_shock_evolution(law, left, middle, right, -2.0, 0.0, 0.5, 1e-3);
  CHECK_FALSE(glued.merge().has_value());
  CHECK(glued.secondary_path() != nullptr);
  CHECK(glued.eval(0.4, -1.0).u() == doctest::Approx(0.8));
}

TEST_CASE("track_shock validates the sampling window") {
  const ScalarLaw law = model::burgers_bistable();
  const auto left = constant_fan(law, 1.0, 1.0, 1e-3, {-2.0, 2.0});
  const auto right = constant_fan(law, -1.0, 1.0, 1e-3, {-2.0, 2.0});
  CHECK_THROWS_AS((void)track_shock(law, *left, *right, 5.0, 1.0, 1e-3), SpanError);
  CHECK_THROWS_AS((void)track_shock(law, *left, *right, 0.0, 3.0, 1e-3), ParamError);
}
