#include "transonic/smooth.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "transonic/gridfd.hpp"

namespace transonic::smooth {

namespace {

double resolve_sign(Direction d) { return d == Direction::SupToSub ? 1.0 : -1.0; }

Method resolve_method(Method m, const FlowParams& p) {
  if (m != Method::Auto) return m;
  return p.alpha == 0.0 ? Method::ClosedForm : Method::Ode;
}

}  // namespace

TildeTrajectory build_tilde_trajectory(const FlowParams& params, double b0,
                                       Direction direction, double n_lo, double n_hi,
                                       Method method, double eps0_factor) {
  const double J = params.J;
  if (!(b0 > 0.0 && b0 < J))
    throw DomainError("build_tilde_trajectory: requires constant supersonic doping 0 < b0 < J");
  if (!(n_lo < J && J < n_hi))
    throw DomainError("build_tilde_trajectory: window must contain the sonic density J");

  method = resolve_method(method, params);
  if (method == Method::ClosedForm && params.alpha != 0.0)
    throw DomainError("build_tilde_trajectory: closed form requires alpha = 0");

  TildeTrajectory traj(params, b0);
  traj.b0_ = b0;
  traj.direction_ = direction;
  traj.method_ = method;
  traj.n_lo_ = n_lo;
  traj.n_hi_ = n_hi;
  traj.eps0_ = eps0_factor * J;
  traj.k_ = model::sonic_slope_k(params, b0,
                                 direction == Direction::SupToSub
                                     ? model::SonicBranch::Plus
                                     : model::SonicBranch::Minus);
  const double k = traj.k_;
  const double eps0 = traj.eps0_;

  // Etilde over the gap (J - eps0, J + eps0) is the first-order seed
  // k * (n - J); dx/dn there is 2/(J^2 k).
  auto make_side = [&](double n_from, double n_to) -> odeint::DenseTrajectory {
    const double delta = n_from - J;  // +-eps0
    odeint::IvpSpec spec;
    spec.start = n_from;
    spec.stop = n_to;
    spec.y0 = Vector(2);
    spec.y0[0] = k * delta;                 // Etilde seed
    spec.y0[1] = delta * 2.0 / (J * J * k); // x_rel seed
    spec.rtol = 1e-11;
    spec.atol = 1e-13;
    if (method == Method::ClosedForm) {
      // Etilde is known in closed form; only x_rel is integrated. The state
      // keeps both components so the two routes share a layout, but the
      // first one stays frozen and is never sampled.
      spec.y0[0] = 0.0;
      spec.rhs = [&params, b0, sgn = resolve_sign(direction)](double n, const Vector&, Vector& dy) {
        double w = sgn * model::W_of(n, b0, params);
        dy[0] = 0.0;
        dy[1] = (n + params.J) / (n * n * n * w);
      };
    } else {
      spec.rhs = [&params, b0](double n, const Vector& y, Vector& dy) {
        const double Jl = params.J;
        double w = y[0] / (n - Jl);
        dy[0] = (n + Jl) * (n - b0) / (n * n * n * w) + params.alpha * Jl / (n * n);
        dy[1] = (n + Jl) / (n * n * n * w);
      };
      // Wtilde -> 0 away from the sonic line: the trajectory leaves the
      // monotone branch (n_* reached).
      odeint::Event branch_end;
      branch_end.fn = [](double, const Vector& y) { return y[0]; };
      branch_end.direction = 0;
      branch_end.terminal = true;
      spec.events.push_back(branch_end);
    }
    try {
      return odeint::integrate(spec);
    } catch (const odeint::IntegrationError& e) {
      throw DomainError(std::string("build_tilde_trajectory: branch exhausted near n = ") +
                        std::to_string(e.x_last) + " (" + e.what() + ")");
    }
  };

  traj.below_ = make_side(J - eps0, n_lo);
  traj.above_ = make_side(J + eps0, n_hi);

  if (traj.below_->termination() == odeint::Termination::Event)
    traj.n_lo_ = traj.below_->event_hits().front().x;
  if (traj.above_->termination() == odeint::Termination::Event)
    traj.n_hi_ = traj.above_->event_hits().front().x;

  if (method == Method::Ode && traj.n_lo_ > n_lo + 1e-12 * J)
    throw DomainError("build_tilde_trajectory: branch exhausted at n_* ~= " +
                      std::to_string(traj.n_lo_) + " before reaching n_lo = " +
                      std::to_string(n_lo));
  return traj;
}

double TildeTrajectory::etilde(double n) const {
  const double J = params_.J;
  if (method_ == Method::ClosedForm)
    return resolve_sign(direction_) * (n - J) * model::W_of(n, b0_, params_);
  if (std::abs(n - J) <= eps0_) return k_ * (n - J);
  const auto& side = n < J ? *below_ : *above_;
  return side.sample(n)[0];
}

double TildeTrajectory::wtilde(double n) const {
  const double J = params_.J;
  if (method_ == Method::ClosedForm)
    return resolve_sign(direction_) * model::W_of(n, b0_, params_);
  if (std::abs(n - J) <= eps0_) return k_;
  return etilde(n) / (n - J);
}

double TildeTrajectory::x_rel(double n) const {
  const double J = params_.J;
  if (std::abs(n - J) <= eps0_) return (n - J) * 2.0 / (J * J * k_);
  const auto& side = n < J ? *below_ : *above_;
  return side.sample(n)[1];
}

double x_of_n(const TildeTrajectory& traj, double n, double n_anchor, double x_anchor) {
  return x_anchor + traj.x_rel(n) - traj.x_rel(n_anchor);
}

namespace {

/// Builds the trajectory so that its x-span reaches at least span_needed
/// above the sonic point, doubling the upper density window as required.
TildeTrajectory build_covering(const FlowParams& params, double b0, double n_lo,
                               double span_needed, Method method) {
  double n_hi = 2.0 * params.J;
  for (int i = 0; i < 60; ++i) {
    TildeTrajectory t =
        build_tilde_trajectory(params, b0, Direction::SupToSub, n_lo, n_hi, method);
    if (t.x_rel(t.n_hi()) >= span_needed || t.n_hi() < n_hi) return t;
    n_hi = params.J + 2.0 * (n_hi - params.J);
  }
  throw DomainError("assemble_smooth_solution: could not cover the requested span");
}

SonicCrossing measure_crossing(const TildeTrajectory& traj, double x0) {
  const FlowParams& p = traj.params();
  const double J = p.J;
  const double k = traj.k();
  // probe just outside the seed gap, one-sided in n
  const double dn = 8.0 * traj.seed_offset();
  auto state_at = [&](double n) {
    double et = traj.etilde(n);
    double w = traj.wtilde(n);
    double E = et + p.alpha * J / n;
    double n_x = n * n * n / (n + J) * w;
    double x = x0 + traj.x_rel(n);
    return std::array<double, 3>{x, E, n_x};
  };
  auto lo = state_at(J - dn);
  auto hi = state_at(J + dn);
  SonicCrossing c;
  c.direction = traj.direction();
  c.k_used = k;
  c.x0 = x0;
  c.E_at = 0.5 * (lo[1] + hi[1]);
  c.E_slope_at = (hi[1] - lo[1]) / (hi[0] - lo[0]);
  c.n_slope_at = 0.5 * (lo[2] + hi[2]);
  return c;
}

}  // namespace

SmoothSolution assemble_smooth_solution(const FlowParams& params, double b0,
                                        InitialData seed, Method method) {
  const double J = params.J;
  if (!(seed.n0 > 0.0 && seed.n0 < J))
    throw DomainError("assemble_smooth_solution: initial density must be supersonic");
  method = resolve_method(method, params);

  // Provisional trajectory anchored at x_rel(J) = 0; the supersonic distance
  // n0 -> J fixes the crossing location x0.
  TildeTrajectory probe =
      build_tilde_trajectory(params, b0, Direction::SupToSub, seed.n0, 1.5 * J, method);
  double x0 = -probe.x_rel(seed.n0);
  if (!(x0 > 0.0))
    throw DomainError("assemble_smooth_solution: nonpositive crossing location");
  double span_up = params.L - x0;
  TildeTrajectory traj = span_up <= probe.x_rel(probe.n_hi())
                             ? std::move(probe)
                             : build_covering(params, b0, seed.n0, span_up, method);

  SonicCrossing crossing = measure_crossing(traj, x0);
  SmoothSolution sol(std::move(traj), crossing);
  sol.n_begin_ = seed.n0;
  sol.x_end_ = params.L;
  // density reached at x = L
  sol.n_end_ = sol.n_of_x(params.L);
  return sol;
}

SmoothSolution assemble_smooth_solution(const FlowParams& params, double b0,
                                        BoundaryPair seed, Method method) {
  if (!(seed.n_l < params.J && params.J < seed.n_r))
    throw DomainError("assemble_smooth_solution: boundary pair must straddle the sonic line");
  SmoothSolution sol = assemble_smooth_solution(params, b0, InitialData{seed.n_l}, method);
  sol.achieved_n_r = sol.n_at(params.L);
  return sol;
}

double SmoothSolution::n_of_x(double x) const {
  const TildeTrajectory& t = *traj_;
  double x_rel_target = x - crossing_.x0;
  double lo = n_begin_, hi = t.n_hi();
  // x_rel is strictly increasing in n for the SupToSub branch
  double f_lo = t.x_rel(lo) - x_rel_target;
  double f_hi = t.x_rel(hi) - x_rel_target;
  if (f_lo > 1e-9 * (1.0 + std::abs(x)) || f_hi < -1e-9 * (1.0 + std::abs(x)))
    throw DomainError("SmoothSolution: x outside covered span");
  for (int i = 0; i < 90; ++i) {
    double mid = 0.5 * (lo + hi);
    if (t.x_rel(mid) - x_rel_target <= 0.0) lo = mid;
    else hi = mid;
    if (hi - lo < 1e-15 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

double SmoothSolution::n_at(double x) const { return n_of_x(x); }

double SmoothSolution::E_at(double x) const {
  double n = n_of_x(x);
  return traj_->etilde(n) + traj_->params().alpha * traj_->params().J / n;
}

double SmoothSolution::n_x_at(double x) const {
  double n = n_of_x(x);
  const double J = traj_->params().J;
  return n * n * n / (n + J) * traj_->wtilde(n);
}

double SmoothSolution::E_x_at(double x) const { return n_of_x(x) - traj_->b0(); }

bool SmoothSolution::initial_field_admissible() const {
  const FlowParams& p = traj_->params();
  double n0 = n_begin_;
  double E0 = traj_->etilde(n0) + p.alpha * p.J / n0;
  return E0 < std::min(p.alpha, p.alpha * p.J / n0) + 1e-12;
}

SolutionBranch SmoothSolution::sample_branch(int count) const {
  SolutionBranch b;
  b.samples.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double x = x_end_ * i / (count - 1);
    double n = n_of_x(x);
    BranchSample s;
    s.x = x;
    s.n = n;
    s.E = E_at(x);
    s.n_x = n_x_at(x);
    s.E_x = n - traj_->b0();
    s.regime = model::classify_regime(n, traj_->params());
    b.samples.push_back(s);
  }
  return b;
}

ProbeReport stability_probe_smooth(const FlowParams& params, ProbeCase case1,
                                   ProbeCase case2, int grid_points, Method method) {
  SmoothSolution s1 = assemble_smooth_solution(params, case1.b0, InitialData{case1.n0}, method);
  SmoothSolution s2 = assemble_smooth_solution(params, case2.b0, InitialData{case2.n0}, method);

  double E10 = s1.E_at(0.0), E20 = s2.E_at(0.0);
  double delta0 = std::abs(case1.b0 - case2.b0) + std::abs(case1.n0 - case2.n0) +
                  std::abs(E10 - E20);

  const int m = grid_points;
  const double h = params.L / (m - 1);
  Vector dn(m), dE(m);
  for (int i = 0; i < m; ++i) {
    double x = h * i;
    dn[i] = s1.n_at(x) - s2.n_at(x);
    dE[i] = s1.E_at(x) - s2.E_at(x);
  }
  Vector dn1 = gridfd::deriv1(dn, h);
  Vector dE1 = gridfd::deriv1(dE, h);
  Vector dE2 = gridfd::deriv2(dE, h);

  ProbeReport r;
  r.delta0 = delta0;
  r.n_c1_norm = std::max(gridfd::sup_norm(dn), gridfd::sup_norm(dn1));
  r.E_c2_norm = std::max({gridfd::sup_norm(dE), gridfd::sup_norm(dE1), gridfd::sup_norm(dE2)});
  r.ratio = delta0 > 0.0 ? (r.n_c1_norm + r.E_c2_norm) / delta0 : 0.0;
  return r;
}

}  // namespace transonic::smooth
