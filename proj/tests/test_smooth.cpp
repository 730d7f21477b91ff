#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "transonic/gridfd.hpp"
#include "transonic/smooth.hpp"

using namespace transonic;

namespace {
const FlowParams kAlpha0{1.0, 0.0, 1.0};
const FlowParams kTau1{1.0, 1.0, 1.0};
}  // namespace

TEST_CASE("closed-form tilde trajectory reproduces sign(n-J) sqrt(g)") {
  smooth::TildeTrajectory t = smooth::build_tilde_trajectory(
      kAlpha0, 0.5, smooth::Direction::SupToSub, 0.6, 2.0, smooth::Method::ClosedForm);
  for (double n : {0.6, 0.8, 1.3, 1.9}) {
    double expect = (n >= 1.0 ? 1.0 : -1.0) * std::sqrt(model::g_of_n(n, kAlpha0, 0.5));
    CHECK(t.etilde(n) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(t.wtilde(1.0) == doctest::Approx(1.0).epsilon(1e-12));  // k = 1 at alpha = 0
}

TEST_CASE("x_rel is strictly increasing and zero at the sonic point") {
  smooth::TildeTrajectory t = smooth::build_tilde_trajectory(
      kTau1, 0.5, smooth::Direction::SupToSub, 0.7, 1.8);
  CHECK(std::abs(t.x_rel(1.0)) < 1e-12);
  double prev = t.x_rel(0.7);
  for (double n = 0.75; n <= 1.8; n += 0.05) {
    double cur = t.x_rel(n);
    CHECK(cur > prev);
    prev = cur;
  }
  // dx/dn at the sonic point: 2/(J^2 k), k = (1+sqrt 5)/2
  double k = (1.0 + std::sqrt(5.0)) / 2.0;
  double dn = 1e-5;
  double slope = (t.x_rel(1.0 + dn) - t.x_rel(1.0 - dn)) / (2.0 * dn);
  CHECK(slope == doctest::Approx(2.0 / k).epsilon(1e-4));
}

TEST_CASE("numeric dEtilde/dn at the sonic point matches k") {
  smooth::TildeTrajectory t = smooth::build_tilde_trajectory(
      kTau1, 0.5, smooth::Direction::SupToSub, 0.7, 1.8);
  double dn = 1e-4;
  double slope = (t.etilde(1.0 + dn) - t.etilde(1.0 - dn)) / (2.0 * dn);
  CHECK(slope == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-4));
}

TEST_CASE("seed-offset insensitivity of the ODE route") {
  auto build = [&](double f) {
    return smooth::build_tilde_trajectory(kTau1, 0.5, smooth::Direction::SupToSub, 0.7,
                                          1.8, smooth::Method::Ode, f);
  };
  smooth::TildeTrajectory a = build(1e-6);
  smooth::TildeTrajectory b = build(1e-7);
  for (double n : {0.8, 1.2, 1.6})
    CHECK(a.etilde(n) == doctest::Approx(b.etilde(n)).epsilon(1e-8));
}

TEST_CASE("branch exhaustion below n_* raises a domain error") {
  // at alpha = 0 the ODE route sees Etilde -> 0 at n_* ~ 0.37 < 0.36 requested
  CHECK_THROWS_WITH_AS(smooth::build_tilde_trajectory(kAlpha0, 0.5,
                                                      smooth::Direction::SupToSub, 0.05,
                                                      1.5, smooth::Method::Ode),
                       doctest::Contains("branch exhausted"), DomainError);
  // window must contain J
  CHECK_THROWS_AS(smooth::build_tilde_trajectory(kTau1, 0.5,
                                                 smooth::Direction::SupToSub, 1.1, 1.5),
                  DomainError);
  // doping must be supersonic
  CHECK_THROWS_AS(smooth::build_tilde_trajectory(kTau1, 1.5,
                                                 smooth::Direction::SupToSub, 0.7, 1.5),
                  DomainError);
}

TEST_CASE("assembled smooth solution: closed-form sonic junction data") {
  smooth::SmoothSolution sol =
      smooth::assemble_smooth_solution(kTau1, 0.5, smooth::InitialData{0.8});
  const auto& c = sol.crossing();
  CHECK(c.E_at == doctest::Approx(1.0).epsilon(1e-6));          // E(x0) = alpha
  CHECK(c.E_slope_at == doctest::Approx(0.5).epsilon(1e-6));    // E'(x0) = J - b0
  CHECK(c.x0 > 0.0);
  CHECK(c.x0 < 1.0);
  // regime flip across x0
  CHECK(sol.n_at(c.x0 - 0.05) < 1.0);
  CHECK(sol.n_at(c.x0 + 0.05) > 1.0);
  // C1 density: one-sided slopes agree after linear extrapolation to x0
  double d = 1e-4;
  auto one_sided = [&](double s) {
    return 2.0 * sol.n_x_at(c.x0 + s * d) - sol.n_x_at(c.x0 + 2.0 * s * d);
  };
  CHECK(one_sided(-1.0) == doctest::Approx(one_sided(+1.0)).epsilon(1e-6));
}

TEST_CASE("Poisson residual by independent differentiation") {
  smooth::SmoothSolution sol =
      smooth::assemble_smooth_solution(kTau1, 0.5, smooth::InitialData{0.8});
  const int m = 1024;
  const double h = 1.0 / (m - 1);
  Vector E(m), nb(m);
  for (int i = 0; i < m; ++i) {
    double x = h * i;
    E[i] = sol.E_at(x);
    nb[i] = sol.n_at(x) - 0.5;
  }
  CHECK(gridfd::sup_norm(gridfd::deriv1(E, h) - nb) < 1e-6);
}

TEST_CASE("alpha = 0 solution satisfies E^2 = g(n) along the branch") {
  smooth::SmoothSolution sol =
      smooth::assemble_smooth_solution(kAlpha0, 0.5, smooth::InitialData{0.8});
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    double x = i / 400.0;
    double n = sol.n_at(x), E = sol.E_at(x);
    worst = std::max(worst, std::abs(E * E - model::g_of_n(n, kAlpha0, 0.5)));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("boundary-pair assembly reports the achieved subsonic datum") {
  smooth::SmoothSolution sol = smooth::assemble_smooth_solution(
      kTau1, 0.5, smooth::BoundaryPair{0.8, 1.2});
  REQUIRE(sol.achieved_n_r.has_value());
  CHECK(*sol.achieved_n_r == doctest::Approx(sol.n_at(1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(smooth::assemble_smooth_solution(kTau1, 0.5,
                                                   smooth::BoundaryPair{1.2, 0.8}),
                  DomainError);
}

TEST_CASE("invalid initial data") {
  CHECK_THROWS_AS(smooth::assemble_smooth_solution(kTau1, 0.5, smooth::InitialData{1.2}),
                  DomainError);
  CHECK_THROWS_AS(smooth::assemble_smooth_solution(kTau1, 0.5, smooth::InitialData{-0.5}),
                  DomainError);
}

TEST_CASE("pipeline cross-validation at alpha = 0 (ODE vs closed form)") {
  double ns = model::n_star(kAlpha0, 0.5);
  double lo = ns + 0.05;
  smooth::TildeTrajectory cf = smooth::build_tilde_trajectory(
      kAlpha0, 0.5, smooth::Direction::SupToSub, lo, 2.0, smooth::Method::ClosedForm);
  smooth::TildeTrajectory ode = smooth::build_tilde_trajectory(
      kAlpha0, 0.5, smooth::Direction::SupToSub, lo, 2.0, smooth::Method::Ode);
  double worst = 0.0;
  for (int i = 0; i <= 512; ++i) {
    double n = lo + (2.0 - lo) * i / 512.0;
    worst = std::max(worst, std::abs(cf.etilde(n) - ode.etilde(n)));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("identical probe cases give a zero-displacement report") {
  smooth::ProbeReport r =
      smooth::stability_probe_smooth(kTau1, {0.5, 0.8}, {0.5, 0.8}, 512);
  CHECK(r.delta0 == 0.0);
  CHECK(r.n_c1_norm < 1e-12);
  CHECK(r.E_c2_norm < 1e-9);
  CHECK(r.ratio == 0.0);
}

TEST_CASE("structural stability scaling across three decades") {
  double rmin = 1e300, rmax = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    smooth::ProbeReport r = smooth::stability_probe_smooth(
        kTau1, {0.5, 0.8}, {0.5 + 0.5 * eps, 0.8 + 0.5 * eps}, 1024);
    CHECK(r.delta0 > 0.0);
    rmin = std::min(rmin, r.ratio);
    rmax = std::max(rmax, r.ratio);
  }
  CHECK(rmax / rmin < 3.0);
}
