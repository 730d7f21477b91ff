#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "transonic/odeint.hpp"

using namespace transonic;

namespace {

odeint::IvpSpec exp_spec() {
  odeint::IvpSpec spec;
  spec.start = 0.0;
  spec.stop = 1.0;
  spec.y0 = Vector::Ones(1);
  spec.rhs = [](double, const Vector& y, Vector& dy) { dy[0] = y[0]; };
  return spec;
}

}  // namespace

TEST_CASE("exponential growth: endpoint and dense output") {
  odeint::DenseTrajectory traj = odeint::integrate(exp_spec());
  CHECK(traj.termination() == odeint::Termination::ReachedStop);
  CHECK(traj.x_end() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(traj.y_end()[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
  // dense output between steps
  for (double x : {0.1, 0.25, 0.5, 0.77, 0.99})
    CHECK(traj.sample(x)[0] == doctest::Approx(std::exp(x)).epsilon(1e-9));
  // interpolant derivative matches the vector field
  for (double x : {0.3, 0.6, 0.9})
    CHECK(traj.sample_derivative(x)[0] == doctest::Approx(std::exp(x)).epsilon(1e-7));
}

TEST_CASE("terminal event at the closed-form crossing ln 2") {
  odeint::IvpSpec spec = exp_spec();
  spec.events.push_back({[](double, const Vector& y) { return y[0] - 2.0; }, +1, true});
  odeint::DenseTrajectory traj = odeint::integrate(spec);
  CHECK(traj.termination() == odeint::Termination::Event);
  REQUIRE(traj.event_hits().size() == 1);
  CHECK(traj.event_hits()[0].x == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(traj.x_end() == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(traj.y_end()[0] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("event direction filter suppresses wrong-way crossings") {
  odeint::IvpSpec spec = exp_spec();
  // y is increasing: a downward-only event on y - 2 must never fire
  spec.events.push_back({[](double, const Vector& y) { return y[0] - 2.0; }, -1, true});
  odeint::DenseTrajectory traj = odeint::integrate(spec);
  CHECK(traj.termination() == odeint::Termination::ReachedStop);
  CHECK(traj.event_hits().empty());
}

TEST_CASE("non-terminal events record every crossing") {
  odeint::IvpSpec spec;
  spec.start = 0.0;
  spec.stop = 4.0 * M_PI;
  spec.y0 = Vector(2);
  spec.y0[0] = 0.0;
  spec.y0[1] = 1.0;
  spec.rhs = [](double, const Vector& y, Vector& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  spec.events.push_back({[](double, const Vector& y) { return y[0]; }, 0, false});
  odeint::DenseTrajectory traj = odeint::integrate(spec);
  // sin(x) crosses zero at pi, 2pi, 3pi, 4pi (the endpoint crossing may or
  // may not be localized depending on the final step)
  CHECK(traj.event_hits().size() >= 3);
  CHECK(traj.event_hits()[0].x == doctest::Approx(M_PI).epsilon(1e-8));
  CHECK(traj.event_hits()[1].x == doctest::Approx(2.0 * M_PI).epsilon(1e-8));
}

TEST_CASE("backward integration") {
  odeint::IvpSpec spec;
  spec.start = 1.0;
  spec.stop = 0.0;
  spec.y0 = Vector(1);
  spec.y0[0] = std::exp(1.0);
  spec.rhs = [](double, const Vector& y, Vector& dy) { dy[0] = y[0]; };
  odeint::DenseTrajectory traj = odeint::integrate(spec);
  CHECK(traj.y_end()[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(traj.sample(0.5)[0] == doctest::Approx(std::exp(0.5)).epsilon(1e-9));
}

TEST_CASE("energy drift of the harmonic oscillator stays small") {
  odeint::IvpSpec spec;
  spec.start = 0.0;
  spec.stop = 20.0 * M_PI;
  spec.y0 = Vector(2);
  spec.y0[0] = 1.0;
  spec.y0[1] = 0.0;
  spec.rhs = [](double, const Vector& y, Vector& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  odeint::DenseTrajectory traj = odeint::integrate(spec);
  double E = traj.y_end()[0] * traj.y_end()[0] + traj.y_end()[1] * traj.y_end()[1];
  CHECK(E == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("finite-time blowup raises IntegrationError with location") {
  odeint::IvpSpec spec;
  spec.start = 0.0;
  spec.stop = 2.0;
  spec.y0 = Vector::Ones(1);
  spec.rhs = [](double, const Vector& y, Vector& dy) { dy[0] = y[0] * y[0]; };
  // y' = y^2, y(0) = 1 blows up at x = 1
  try {
    odeint::integrate(spec);
    FAIL("expected IntegrationError");
  } catch (const odeint::IntegrationError& e) {
    CHECK(e.x_last == doctest::Approx(1.0).epsilon(1e-2));
    CHECK((e.kind() == "singularity" || e.kind() == "rhs"));
  }
}

TEST_CASE("spec validation") {
  odeint::IvpSpec spec = exp_spec();
  spec.stop = spec.start;
  CHECK_THROWS_AS(odeint::integrate(spec), ConfigError);
  spec = exp_spec();
  spec.rtol = 0.0;
  CHECK_THROWS_AS(odeint::integrate(spec), ConfigError);
}

TEST_CASE("sampling outside the integrated span throws") {
  odeint::DenseTrajectory traj = odeint::integrate(exp_spec());
  CHECK_THROWS_AS(traj.sample(1.5), DomainError);
  CHECK_THROWS_AS(traj.sample(-0.5), DomainError);
}

TEST_CASE("max_step cap is honored") {
  odeint::IvpSpec spec = exp_spec();
  spec.max_step = 0.01;
  odeint::DenseTrajectory traj = odeint::integrate(spec);
  for (const auto& s : traj.steps()) CHECK(std::abs(s.h) <= 0.01 + 1e-12);
  CHECK(traj.y_end()[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
}
