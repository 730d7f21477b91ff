#ifndef TRANSONIC_SHOCK_HPP
#define TRANSONIC_SHOCK_HPP

#include <optional>
#include <vector>

#include "transonic/doping.hpp"
#include "transonic/model.hpp"
#include "transonic/odeint.hpp"
#include "transonic/types.hpp"

// Transonic shock steady-states: branch integration in x (the branches never
// touch the sonic line, so the x-form ODE stays regular), the closed-form
// jump map S(n) = J^2/n, and shock fitting against downstream data via
// bisection on the monotone map M(x_s) = n(L).

namespace transonic::shock {

inline constexpr double kSonicGuardFactor = 1e-6;  // guard band eps_sonic = 1e-6 * J

/// Dense supersonic or subsonic branch of the x-form system
///   n_x = (nE - alpha J) n^2 / (n^2 - J^2),  E_x = n - b(x).
struct Branch {
  odeint::DenseTrajectory traj;
  double x_begin;
  double x_end;

  double n_at(double x) const { return traj.sample(x)[0]; }
  double E_at(double x) const { return traj.sample(x)[1]; }
  double n_x_at(double x) const { return traj.sample_derivative(x)[0]; }
  double E_x_at(double x) const { return traj.sample_derivative(x)[1]; }

  SolutionBranch sample(int count, const FlowParams& params) const;
};

/// Integrates the supersonic branch from (n_l, E_l) at x = 0 while
/// n < J - guard. A sonic approach before x_end throws carrying the event
/// location; no shock is placeable beyond it.
Branch supersonic_branch(const FlowParams& params, const DopingProfile& b, double n_l,
                         double E_l, double x_end);

/// Integrates the subsonic branch from (n_plus, E_at) at x_s to x_end,
/// requiring n > J + guard throughout.
Branch subsonic_branch(const FlowParams& params, const DopingProfile& b, double x_s,
                       double n_plus, double E_at, double x_end);

struct ShockSolution {
  Branch supersonic;
  Branch subsonic;
  JumpRecord jump;
  double n_l, E_l;
  double n_at_L;

  double n_at(double x) const;
  double E_at(double x) const;
};

/// Places the jump at x_s: n- -> S(n-) with E continuous.
ShockSolution shock_solution_at(const FlowParams& params, const DopingProfile& b,
                                double n_l, double E_l, double x_s);

/// Downstream density map M(x_s) = n(L) of the shock solution with the
/// shock placed at x_s.
double boundary_map_M(const FlowParams& params, const DopingProfile& b, double n_l,
                      double E_l, double x_s);

struct MSample {
  double x_s;
  double n_at_L;
  double E_at_shock;
};

struct ShockFitReport {
  double x_s;                   // fitted position
  double n_at_L;                // achieved M(x_s)
  std::vector<MSample> table;   // sampled (x_s, M) pairs including bisection iterates
  bool monotone_ok;             // no ordering violation among E>0 samples
  bool field_positive_ok;       // E > 0 held at every sampled shock
  double E_at_shock;
  std::optional<ShockSolution> solution;
};

/// Bisection on M over [x_lo, x_hi] until |M(x_s) - n_r| < tol_fit or the
/// bracket is narrower than 1e-12 * L.
ShockFitReport fit_shock_position(const FlowParams& params, const DopingProfile& b,
                                  double n_l, double E_l, double n_r, double x_lo,
                                  double x_hi, double tol_fit = -1.0);

struct ScalingRow {
  double eps;
  double x_s;
  double displacement;      // |x_s(eps) - x_s(0)|
  double ratio;             // displacement / eps
  double sup_c1_diff;       // ||n~ - n0||_{C1} on the supersonic sub-branch
  double sup_c1_ratio;      // sup_c1_diff / eps
};

struct ScalingReport {
  double x_s_base;
  std::vector<ScalingRow> rows;
  double ratio_spread;      // max ratio / min ratio over eps > 0 rows
};

/// Refits the shock for b = b0 + eps * delta for each eps and reports the
/// displacement and supersonic-branch difference scalings.
ScalingReport stability_probe_shock(const FlowParams& params, const DopingProfile& b0,
                                    const DopingProfile& delta, double n_l, double E_l,
                                    double n_r, double x_lo, double x_hi,
                                    const std::vector<double>& eps_list);

}  // namespace transonic::shock

#endif  // TRANSONIC_SHOCK_HPP
