#ifndef TRANSONIC_STABILITY_HPP
#define TRANSONIC_STABILITY_HPP

#include <functional>
#include <optional>
#include <vector>

#include "transonic/odeint.hpp"
#include "transonic/shock.hpp"
#include "transonic/types.hpp"

// Linearized dynamics around a transonic shock steady-state on the subsonic
// side [x0, L]: coefficient fields of the linearized wave operator, the
// eigenvalue shooting problem for separable perturbations e^{nu t} U(x), and
// the growth-rate search when the field at the shock is negative.

namespace transonic::stability {

/// Coefficient fields on the subsonic branch, sampled on a grid and backed
/// by the dense branch trajectory for evaluation at arbitrary x.
class LinearizedCoeffs {
 public:
  /// mu00 = 1, mu11 = ubar^2 - 1, mu01 = mu10 = ubar,
  /// beta0 = alpha + 2 d_x ubar, beta1 = d_x(ubar^2) + Ebar, zeta = nbar.
  double ubar(double x) const;      // J / nbar
  double nbar(double x) const;
  double Ebar(double x) const;
  double dx_ubar(double x) const;
  double dx_ubar_sq(double x) const;

  double x0() const { return x0_; }
  double L() const { return L_; }
  double alpha() const { return alpha_; }
  double xi1() const { return xi1_; }      // 2 ubar / (1 - ubar^2) at x0
  double omega1() const { return omega1_; }  // Ebar / (1 - ubar^2) at x0

  /// Upper bracket endpoint of the growth-rate interval, -Ebar/ubar at x0.
  double nu_max() const;
  /// min over the branch of 1 - ubar^2 (subsonic nondegeneracy margin).
  double subsonic_margin() const { return min_one_minus_usq_; }

  struct GridRow {
    double x, nbar, ubar, Ebar, dx_ubar, dx_ubar_sq;
  };
  const std::vector<GridRow>& grid() const { return grid_; }

 private:
  friend LinearizedCoeffs linearized_coeffs(const shock::Branch&, const FlowParams&,
                                            int);
  LinearizedCoeffs() = default;

  std::optional<odeint::DenseTrajectory> branch_;
  double J_ = 0.0, alpha_ = 0.0, x0_ = 0.0, L_ = 0.0;
  double xi1_ = 0.0, omega1_ = 0.0;
  double min_one_minus_usq_ = 0.0;
  std::vector<GridRow> grid_;
};

LinearizedCoeffs linearized_coeffs(const shock::Branch& sub, const FlowParams& params,
                                   int grid_points = 1024);

struct ShotResult {
  odeint::DenseTrajectory trajectory;  // state (U, U_x) over [x0, L]
  double U_x_at_L;

  double U(double x) const { return trajectory.sample(x)[0]; }
  double U_x(double x) const { return trajectory.sample(x)[1]; }
};

/// Integrates the shooting problem
///   (1-ubar^2) U_xx - (d_x(ubar^2) + 2 nu ubar + Ebar) U_x
///     - (nu^2 + 2 nu d_x ubar + alpha nu + nbar) U = 0
/// from x0 with U(x0) = gamma and
/// U_x(x0) = (2 ubar/(1-ubar^2))(x0) (Ebar/(2 ubar)(x0) + nu) gamma.
/// The U-coefficient carries +alpha*nu, the sign produced by substituting
/// e^{nu t} U into the linearized time-dependent operator.
ShotResult shoot_mode(const LinearizedCoeffs& coeffs, double nu, double gamma);

/// Initial slope of the shot, available without integrating.
double shoot_initial_slope(const LinearizedCoeffs& coeffs, double nu, double gamma);

struct InstabilityMode {
  double nu;
  double gamma;
  double matching_station;   // x_m with U_x(x_m) = 0; L when the full
                             // Neumann problem admits the root
  double residual_at_station;
  double max_abs_U;
  std::vector<double> xs;
  std::vector<double> U;
  std::pair<double, double> bracket;
};

struct ModeSearchResult {
  std::optional<InstabilityMode> mode;
  std::string no_mode_reason;  // set when empty
};

/// Root-finds U_x(x_m; nu) over nu in (0, nu_max) by bisection, first at
/// x_m = L, then retreating the matching station inward when no sign change
/// exists at L. Requires Ebar(x0) < 0.
ModeSearchResult find_growth_rate(const LinearizedCoeffs& coeffs, double gamma,
                                  double tol = 1e-10, int stations = 16);

struct ModeResiduals {
  double interior_sup;        // sup-norm defect of e^{nu t}U in the linearized PDE
  double boundary_defect_x0;  // defect of the x0 boundary relation
  double terminal_defect;     // |U_x| at the matching station, relative
  double growth_factor;       // e^{nu}
};

ModeResiduals verify_mode(const LinearizedCoeffs& coeffs, const InstabilityMode& mode,
                          const ShotResult& shot, int samples = 512);

}  // namespace transonic::stability

#endif  // TRANSONIC_STABILITY_HPP
