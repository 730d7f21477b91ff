#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "transonic/gridfd.hpp"
#include "transonic/shock.hpp"

using namespace transonic;

namespace {
const FlowParams kTau1{1.0, 1.0, 1.0};
const DopingProfile kB05 = DopingProfile::constant(0.5);
// A configuration whose supersonic branch survives the whole domain:
// n E - alpha J > 0 keeps the density falling away from the sonic line.
constexpr double kNl = 0.7, kEl = 2.0;
}  // namespace

TEST_CASE("supersonic branch stays supersonic and satisfies Poisson") {
  shock::Branch sup = shock::supersonic_branch(kTau1, kB05, kNl, kEl, 1.0);
  const int m = 513;
  const double h = 1.0 / (m - 1);
  Vector E(m), nb(m);
  for (int i = 0; i < m; ++i) {
    double x = h * i;
    double n = sup.n_at(x);
    CHECK(n < 1.0);
    CHECK(n > 0.0);
    E[i] = sup.E_at(x);
    nb[i] = n - 0.5;
  }
  CHECK(gridfd::sup_norm(gridfd::deriv1(E, h) - nb) < 1e-6);
}

TEST_CASE("sonic collision is reported with its location") {
  // E < 0 drives the supersonic density up into the sonic line
  CHECK_THROWS_WITH_AS(shock::supersonic_branch(kTau1, kB05, 0.95, -1.0, 1.0),
                       doctest::Contains("sonic collision"), DomainError);
  CHECK_THROWS_AS(shock::supersonic_branch(kTau1, kB05, 1.2, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(shock::subsonic_branch(kTau1, kB05, 0.2, 0.9, 1.0, 1.0), DomainError);
}

TEST_CASE("jump placement: exact Rankine-Hugoniot data") {
  shock::ShockSolution s = shock::shock_solution_at(kTau1, kB05, kNl, kEl, 0.4);
  CHECK(s.jump.x_s == doctest::Approx(0.4));
  CHECK(s.jump.n_minus < 1.0);
  CHECK(s.jump.n_plus > 1.0);
  CHECK(s.jump.entropy_ok);
  CHECK(s.jump.n_plus == doctest::Approx(1.0 / s.jump.n_minus).epsilon(1e-14));
  CHECK(s.jump.rh_residual < 1e-12);
  // the field is continuous across the shock
  CHECK(s.supersonic.E_at(0.4) == doctest::Approx(s.subsonic.E_at(0.4)).epsilon(1e-12));
  CHECK_THROWS_AS(shock::shock_solution_at(kTau1, kB05, kNl, kEl, 1.5), DomainError);
}

TEST_CASE("boundary map M is strictly decreasing under E > 0") {
  double prev = 1e300;
  for (int i = 0; i < 10; ++i) {
    double x_s = 0.15 + (0.60 - 0.15) * i / 9.0;
    shock::ShockSolution s = shock::shock_solution_at(kTau1, kB05, kNl, kEl, x_s);
    CHECK(s.jump.E_value > 0.0);
    CHECK(s.n_at_L < prev);
    prev = s.n_at_L;
  }
}

TEST_CASE("shock fitting by bisection on M") {
  double n_r = shock::boundary_map_M(kTau1, kB05, kNl, kEl, 0.37);
  shock::ShockFitReport fit =
      shock::fit_shock_position(kTau1, kB05, kNl, kEl, n_r, 0.15, 0.60);
  CHECK(fit.x_s == doctest::Approx(0.37).epsilon(1e-7));
  CHECK(std::abs(fit.n_at_L - n_r) < 1e-9);
  CHECK(fit.monotone_ok);
  CHECK(fit.field_positive_ok);
  CHECK(fit.table.size() >= 3);
  REQUIRE(fit.solution.has_value());
  CHECK(fit.solution->jump.rh_residual < 1e-12);

  // a target outside the image of the bracket is rejected
  CHECK_THROWS_WITH_AS(shock::fit_shock_position(kTau1, kB05, kNl, kEl, 3.0, 0.15, 0.60),
                       doctest::Contains("no shock in bracket"), DomainError);
  CHECK_THROWS_AS(shock::fit_shock_position(kTau1, kB05, kNl, kEl, 0.9, 0.15, 0.60),
                  DomainError);
  CHECK_THROWS_AS(shock::fit_shock_position(kTau1, kB05, kNl, kEl, n_r, 0.60, 0.15),
                  DomainError);
}

TEST_CASE("piecewise evaluation of the shock solution") {
  shock::ShockSolution s = shock::shock_solution_at(kTau1, kB05, kNl, kEl, 0.4);
  CHECK(s.n_at(0.2) < 1.0);
  CHECK(s.n_at(0.7) > 1.0);
  CHECK(s.n_at(0.0) == doctest::Approx(kNl).epsilon(1e-12));
  CHECK(s.E_at(0.0) == doctest::Approx(kEl).epsilon(1e-12));
  CHECK(s.n_at_L == doctest::Approx(s.subsonic.n_at(1.0)).epsilon(1e-14));
}

TEST_CASE("branch sampling classifies regimes and reports derivatives") {
  shock::ShockSolution s = shock::shock_solution_at(kTau1, kB05, kNl, kEl, 0.4);
  SolutionBranch b = s.subsonic.sample(65, kTau1);
  CHECK(b.samples.front().x == doctest::Approx(0.4));
  CHECK(b.samples.back().x == doctest::Approx(1.0));
  for (const auto& r : b.samples) {
    CHECK(r.regime == Regime::Subsonic);
    CHECK(r.E_x == doctest::Approx(r.n - 0.5).epsilon(1e-8));
  }
}

TEST_CASE("shock-position stability scaling under doping perturbations") {
  double n_r = shock::boundary_map_M(kTau1, kB05, kNl, kEl, 0.37);
  DopingProfile delta = DopingProfile::constant(1.0);
  shock::ScalingReport rep = shock::stability_probe_shock(
      kTau1, kB05, delta, kNl, kEl, n_r, 0.15, 0.60, {0.0, 1e-2, 1e-3, 1e-4});
  REQUIRE(rep.rows.size() == 4);
  // eps = 0 row: zero displacement
  CHECK(rep.rows[0].eps == 0.0);
  CHECK(rep.rows[0].displacement < 1e-10);
  CHECK(rep.rows[0].ratio == 0.0);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].ratio > 0.0);
  CHECK(rep.ratio_spread < 3.0);
  CHECK(rep.ratio_spread >= 1.0);
}

TEST_CASE("perturbed doping profiles evaluate as base + eps * delta") {
  DopingProfile delta = DopingProfile::constant(1.0);
  DopingProfile b = DopingProfile::perturbed(kB05, delta, 1e-2, 0.0, 1.0);
  CHECK(b(0.3) == doctest::Approx(0.51).epsilon(1e-12));
}
