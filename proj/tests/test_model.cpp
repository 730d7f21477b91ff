#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "transonic/model.hpp"

using namespace transonic;

namespace {
const FlowParams kAlpha0{1.0, 0.0, 1.0};
const FlowParams kTau1{1.0, 1.0, 1.0};
}  // namespace

TEST_CASE("regime classification with sonic tolerance band") {
  CHECK(model::classify_regime(0.5, kTau1) == Regime::Supersonic);
  CHECK(model::classify_regime(1.5, kTau1) == Regime::Subsonic);
  CHECK(model::classify_regime(1.0, kTau1) == Regime::Sonic);
  CHECK(model::classify_regime(1.0 + 0.5e-9, kTau1) == Regime::Sonic);
  CHECK(model::classify_regime(1.0 + 1.0e-8, kTau1) == Regime::Subsonic);
  CHECK_THROWS_AS(model::classify_regime(-1.0, kTau1), InvalidStateError);
  CHECK_THROWS_AS(model::classify_regime(0.5, kTau1, -1e-3), InvalidStateError);
}

TEST_CASE("sonic slopes: closed forms and Vieta identities") {
  // alpha = 0, b = 0.5: k+- = +-sqrt(8*0.5)/2 = +-1
  CHECK(model::sonic_slope_k(kAlpha0, 0.5, model::SonicBranch::Plus) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(model::sonic_slope_k(kAlpha0, 0.5, model::SonicBranch::Minus) ==
        doctest::Approx(-1.0).epsilon(1e-14));
  // alpha = 1, b = 0.5: k+ = (1 + sqrt(5))/2
  double kp = model::sonic_slope_k(kTau1, 0.5, model::SonicBranch::Plus);
  double km = model::sonic_slope_k(kTau1, 0.5, model::SonicBranch::Minus);
  CHECK(kp == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  // Vieta: sum = alpha/J, product = -2(J - b)/J^2
  CHECK(kp + km == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kp * km == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS_AS(model::sonic_slope_k(kTau1, 1.5, model::SonicBranch::Plus), DomainError);
  CHECK_THROWS_AS(model::sonic_slope_k(kTau1, 0.0, model::SonicBranch::Plus), DomainError);
}

TEST_CASE("alpha=0 first integral g and derivatives") {
  // g(2; J=1, b=0.5) = 4 - ln 2 + 1 - 1/8 + 2(0.25 - 2) = 1.375 - ln 2
  CHECK(model::g_of_n(2.0, kAlpha0, 0.5) ==
        doctest::Approx(1.375 - std::log(2.0)).epsilon(1e-15));
  CHECK(model::g_of_n(1.0, kAlpha0, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  // g'(J) = 0: the sonic point is a double zero of g
  CHECK(model::dg_dn(1.0, kAlpha0, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  // finite-difference consistency of dg_dn
  double h = 1e-6;
  double fd = (model::g_of_n(1.5 + h, kAlpha0, 0.5) - model::g_of_n(1.5 - h, kAlpha0, 0.5)) /
              (2.0 * h);
  CHECK(model::dg_dn(1.5, kAlpha0, 0.5) == doctest::Approx(fd).epsilon(1e-9));
  // h_of = g''' : at n = J = 1, b = 0.5: -4 (0.5 + 3 - 3) = -2
  CHECK(model::h_of(1.0, 0.5, kAlpha0) == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("factorization E = (n - J) W with Gauss-Legendre remainder") {
  for (double n : {0.6, 0.8, 1.2, 1.5, 2.0}) {
    double E = model::trajectory_field(n, kAlpha0, 0.5);
    double W = model::W_of(n, 0.5, kAlpha0);
    CHECK(std::abs(E - (n - 1.0) * W) < 1e-12);
    CHECK(E * E == doctest::Approx(model::g_of_n(n, kAlpha0, 0.5)).epsilon(1e-12));
  }
  // signed square root: negative below J, positive above
  CHECK(model::trajectory_field(0.8, kAlpha0, 0.5) < 0.0);
  CHECK(model::trajectory_field(1.2, kAlpha0, 0.5) > 0.0);
  // W at the sonic point equals the alpha = 0 slope k = 1
  CHECK(model::W_of(1.0 + 1e-9, 0.5, kAlpha0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(model::W_of(1.0 - 1e-9, 0.5, kAlpha0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("n_star: zero of g below the sonic density") {
  double ns = model::n_star(kAlpha0, 0.5);
  CHECK(ns > 0.0);
  CHECK(ns < 1.0);
  CHECK(std::abs(model::g_of_n(ns, kAlpha0, 0.5)) < 1e-10);
  // bracket sanity for J=1, b=0.5 (g(0.35) < 0 < g(0.4))
  CHECK(ns > 0.35);
  CHECK(ns < 0.40);
}

TEST_CASE("jump map S: exactness, entropy, round trip") {
  CHECK(model::shock_map_S(0.5, kTau1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(model::momentum_flux(0.5, kTau1) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(model::momentum_flux(2.0, kTau1) == doctest::Approx(2.5).epsilon(1e-15));
  for (double n : {0.2, 0.5, 0.9}) {
    double ns = model::shock_map_S(n, kTau1);
    CHECK(ns > 1.0);  // entropy: image is subsonic
    CHECK(std::abs(1.0 / ns - n) < 1e-15);  // S is an involution through J^2/n
    CHECK(std::abs(model::momentum_flux(n, kTau1) - model::momentum_flux(ns, kTau1)) <
          1e-13);
  }
  CHECK_THROWS_AS(model::shock_map_S(1.0, kTau1), DomainError);
  CHECK_THROWS_AS(model::shock_map_S(1.5, kTau1), DomainError);
}

TEST_CASE("Rankine-Hugoniot residuals") {
  State left{0.3, 0.5, 1.7};
  State right{0.3, 2.0, 1.7};
  auto [flux, field] = model::rh_residuals(left, right, kTau1);
  CHECK(flux == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(field == 0.0);

  State corrupt{0.3, 2.1, 1.7};
  auto [flux2, field2] = model::rh_residuals(left, corrupt, kTau1);
  CHECK(flux2 == doctest::Approx(std::abs(2.5 - (2.1 + 1.0 / 2.1))).epsilon(1e-13));
  CHECK(field2 == 0.0);
}

TEST_CASE("desingularizing factor f") {
  CHECK(model::desingularizing_factor_f(2.0, kTau1) == doctest::Approx(3.0 / 8.0));
  CHECK(model::desingularizing_factor_f(0.5, kTau1) == doctest::Approx(-6.0));
  CHECK(model::desingularizing_factor_f(1.0, kTau1) == doctest::Approx(0.0));
  CHECK_THROWS_AS(model::desingularizing_factor_f(0.0, kTau1), InvalidStateError);
}

TEST_CASE("FlowParams validation") {
  CHECK_THROWS_AS(FlowParams(-1.0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(FlowParams(1.0, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(FlowParams(1.0, 0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(FlowParams::with_tau(1.0, 0.0, 1.0), ConfigError);
  CHECK(FlowParams::with_tau(1.0, 2.0, 1.0).alpha == doctest::Approx(0.5));
}
