#include "transonic/shock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "transonic/gridfd.hpp"

namespace transonic::shock {

namespace {

odeint::Rhs steady_rhs(const FlowParams& params, const DopingProfile& b) {
  return [&params, b](double x, const Vector& y, Vector& dy) {
    const double J = params.J;
    double n = y[0], E = y[1];
    dy[0] = (n * E - params.alpha * J) * n * n / (n * n - J * J);
    dy[1] = n - b(x);
  };
}

}  // namespace

SolutionBranch Branch::sample(int count, const FlowParams& params) const {
  SolutionBranch out;
  out.samples.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double x = x_begin + (x_end - x_begin) * i / (count - 1);
    Vector y = traj.sample(x);
    Vector dy = traj.sample_derivative(x);
    out.samples.push_back({x, y[0], y[1], dy[0], dy[1],
                           model::classify_regime(y[0], params)});
  }
  return out;
}

Branch supersonic_branch(const FlowParams& params, const DopingProfile& b, double n_l,
                         double E_l, double x_end) {
  const double J = params.J;
  const double guard = kSonicGuardFactor * J;
  if (!(n_l > 0.0 && n_l < J - guard))
    throw DomainError("supersonic_branch: upstream density must be supersonic");
  if (!(x_end > 0.0 && x_end <= params.L))
    throw DomainError("supersonic_branch: x_end must lie in (0, L]");

  odeint::IvpSpec spec;
  spec.rhs = steady_rhs(params, b);
  spec.start = 0.0;
  spec.stop = x_end;
  spec.y0 = Vector(2);
  spec.y0[0] = n_l;
  spec.y0[1] = E_l;
  // sonic approach from below
  spec.events.push_back({[J, guard](double, const Vector& y) { return y[0] - (J - guard); },
                         +1, true});
  // vacuum
  spec.events.push_back({[J](double, const Vector& y) { return y[0] - 1e-8 * J; }, -1, true});

  odeint::DenseTrajectory traj = odeint::integrate(spec);
  if (traj.termination() == odeint::Termination::Event) {
    const auto& hit = traj.event_hits().back();
    if (hit.event_id == 0)
      throw DomainError("supersonic_branch: sonic collision at x = " +
                        std::to_string(hit.x) + "; no shock placeable beyond it");
    throw DomainError("supersonic_branch: vacuum reached at x = " + std::to_string(hit.x));
  }
  return Branch{std::move(traj), 0.0, x_end};
}

Branch subsonic_branch(const FlowParams& params, const DopingProfile& b, double x_s,
                       double n_plus, double E_at, double x_end) {
  const double J = params.J;
  const double guard = kSonicGuardFactor * J;
  if (!(n_plus > J + guard))
    throw DomainError("subsonic_branch: density must be subsonic");
  if (!(x_end > x_s)) throw DomainError("subsonic_branch: empty interval");

  odeint::IvpSpec spec;
  spec.rhs = steady_rhs(params, b);
  spec.start = x_s;
  spec.stop = x_end;
  spec.y0 = Vector(2);
  spec.y0[0] = n_plus;
  spec.y0[1] = E_at;
  // sonic approach from above
  spec.events.push_back({[J, guard](double, const Vector& y) { return y[0] - (J + guard); },
                         -1, true});

  odeint::DenseTrajectory traj = odeint::integrate(spec);
  if (traj.termination() == odeint::Termination::Event)
    throw DomainError("subsonic_branch: sonic degeneracy at x = " +
                      std::to_string(traj.event_hits().back().x));
  return Branch{std::move(traj), x_s, x_end};
}

ShockSolution shock_solution_at(const FlowParams& params, const DopingProfile& b,
                                double n_l, double E_l, double x_s) {
  if (!(x_s > 0.0 && x_s < params.L))
    throw DomainError("shock_solution_at: shock position must lie in (0, L)");
  Branch sup = supersonic_branch(params, b, n_l, E_l, x_s);
  double n_minus = sup.n_at(x_s);
  double E_val = sup.E_at(x_s);
  double n_plus = model::shock_map_S(n_minus, params);

  JumpRecord jump;
  jump.x_s = x_s;
  jump.n_minus = n_minus;
  jump.n_plus = n_plus;
  jump.E_value = E_val;
  jump.rh_residual = std::abs(model::momentum_flux(n_minus, params) -
                              model::momentum_flux(n_plus, params));
  jump.entropy_ok = n_minus < params.J && params.J < n_plus;

  Branch sub = subsonic_branch(params, b, x_s, n_plus, E_val, params.L);
  double n_L = sub.n_at(params.L);
  return ShockSolution{std::move(sup), std::move(sub), jump, n_l, E_l, n_L};
}

double ShockSolution::n_at(double x) const {
  return x < jump.x_s ? supersonic.n_at(x) : subsonic.n_at(x);
}

double ShockSolution::E_at(double x) const {
  return x < jump.x_s ? supersonic.E_at(x) : subsonic.E_at(x);
}

double boundary_map_M(const FlowParams& params, const DopingProfile& b, double n_l,
                      double E_l, double x_s) {
  if (x_s >= params.L) {
    // degenerate zero-length subsonic branch
    Branch sup = supersonic_branch(params, b, n_l, E_l, params.L);
    return model::shock_map_S(sup.n_at(params.L), params);
  }
  return shock_solution_at(params, b, n_l, E_l, x_s).n_at_L;
}

ShockFitReport fit_shock_position(const FlowParams& params, const DopingProfile& b,
                                  double n_l, double E_l, double n_r, double x_lo,
                                  double x_hi, double tol_fit) {
  if (tol_fit <= 0.0) tol_fit = 1e-9 * params.J;
  if (!(n_r > params.J)) throw DomainError("fit_shock_position: n_r must be subsonic");
  if (!(0.0 < x_lo && x_lo < x_hi && x_hi < params.L))
    throw DomainError("fit_shock_position: invalid bracket");

  ShockFitReport report;
  report.monotone_ok = true;
  report.field_positive_ok = true;

  auto eval = [&](double x_s) {
    ShockSolution s = shock_solution_at(params, b, n_l, E_l, x_s);
    report.table.push_back({x_s, s.n_at_L, s.jump.E_value});
    if (!(s.jump.E_value > 0.0)) report.field_positive_ok = false;
    return s;
  };

  ShockSolution s_lo = eval(x_lo);
  ShockSolution s_hi = eval(x_hi);
  double M_lo = s_lo.n_at_L, M_hi = s_hi.n_at_L;
  if (!(M_lo >= n_r && n_r >= M_hi))
    throw DomainError("fit_shock_position: no shock in bracket (M(x_lo) = " +
                      std::to_string(M_lo) + ", M(x_hi) = " + std::to_string(M_hi) +
                      ", n_r = " + std::to_string(n_r) + ")");

  double lo = x_lo, hi = x_hi;
  ShockSolution best = std::abs(M_lo - n_r) < std::abs(M_hi - n_r) ? s_lo : s_hi;
  while (hi - lo > 1e-12 * params.L) {
    double mid = 0.5 * (lo + hi);
    ShockSolution s_mid = eval(mid);
    double M_mid = s_mid.n_at_L;
    if (std::abs(M_mid - n_r) < std::abs(best.n_at_L - n_r)) best = s_mid;
    if (std::abs(M_mid - n_r) < tol_fit) break;
    // M decreases in x_s under the E > 0 hypothesis
    if (M_mid > n_r) lo = mid;
    else hi = mid;
  }

  // monotonicity audit over the sampled table (valid under E > 0 at the shock)
  auto tbl = report.table;
  std::sort(tbl.begin(), tbl.end(), [](const MSample& a, const MSample& c) {
    return a.x_s < c.x_s;
  });
  for (std::size_t i = 1; i < tbl.size(); ++i) {
    if (tbl[i].E_at_shock > 0.0 && tbl[i - 1].E_at_shock > 0.0 &&
        !(tbl[i].n_at_L < tbl[i - 1].n_at_L))
      report.monotone_ok = false;
  }

  report.x_s = best.jump.x_s;
  report.n_at_L = best.n_at_L;
  report.E_at_shock = best.jump.E_value;
  report.solution = std::move(best);
  return report;
}

ScalingReport stability_probe_shock(const FlowParams& params, const DopingProfile& b0,
                                    const DopingProfile& delta, double n_l, double E_l,
                                    double n_r, double x_lo, double x_hi,
                                    const std::vector<double>& eps_list) {
  ShockFitReport base = fit_shock_position(params, b0, n_l, E_l, n_r, x_lo, x_hi);
  if (!base.field_positive_ok)
    throw DomainError("stability_probe_shock: baseline fit has E <= 0 at the shock");

  ScalingReport report;
  report.x_s_base = base.x_s;

  // supersonic sub-branch comparison window [0, x1], clear of every shock
  double x1 = 0.9 * std::min(base.x_s, x_lo);
  const int m = 257;
  const double h = x1 / (m - 1);
  Vector n_base(m);
  for (int i = 0; i < m; ++i) n_base[i] = base.solution->supersonic.n_at(h * i);
  Vector n_base_d = gridfd::deriv1(n_base, h);

  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (double eps : eps_list) {
    DopingProfile b = DopingProfile::perturbed(b0, delta, eps, 0.0, params.L);
    ShockFitReport fit = fit_shock_position(params, b, n_l, E_l, n_r, x_lo, x_hi);

    ScalingRow row;
    row.eps = eps;
    row.x_s = fit.x_s;
    row.displacement = std::abs(fit.x_s - base.x_s);
    row.ratio = eps > 0.0 ? row.displacement / eps : 0.0;

    Vector dn(m);
    for (int i = 0; i < m; ++i)
      dn[i] = fit.solution->supersonic.n_at(h * i) - n_base[i];
    Vector dn1 = gridfd::deriv1(dn, h);
    row.sup_c1_diff = std::max(gridfd::sup_norm(dn), gridfd::sup_norm(dn1));
    row.sup_c1_ratio = eps > 0.0 ? row.sup_c1_diff / eps : 0.0;

    if (eps > 0.0) {
      rmin = std::min(rmin, row.ratio);
      rmax = std::max(rmax, row.ratio);
    }
    report.rows.push_back(row);
  }
  report.ratio_spread = (rmin > 0.0 && std::isfinite(rmin)) ? rmax / rmin : 0.0;
  return report;
}

}  // namespace transonic::shock
