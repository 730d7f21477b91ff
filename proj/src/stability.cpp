#include "transonic/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "transonic/gridfd.hpp"

namespace transonic::stability {

double LinearizedCoeffs::nbar(double x) const { return branch_->sample(x)[0]; }
double LinearizedCoeffs::Ebar(double x) const { return branch_->sample(x)[1]; }
double LinearizedCoeffs::ubar(double x) const { return J_ / nbar(x); }

double LinearizedCoeffs::dx_ubar(double x) const {
  double n = nbar(x);
  double n_x = branch_->sample_derivative(x)[0];
  return -J_ * n_x / (n * n);
}

double LinearizedCoeffs::dx_ubar_sq(double x) const {
  return 2.0 * ubar(x) * dx_ubar(x);
}

double LinearizedCoeffs::nu_max() const {
  double u0 = ubar(x0_);
  double E0 = Ebar(x0_);
  if (!(E0 < 0.0))
    throw DomainError("LinearizedCoeffs: growth-rate interval requires Ebar(x0) < 0");
  return -E0 / u0;
}

LinearizedCoeffs linearized_coeffs(const shock::Branch& sub, const FlowParams& params,
                                   int grid_points) {
  LinearizedCoeffs c;
  c.branch_ = sub.traj;
  c.J_ = params.J;
  c.alpha_ = params.alpha;
  c.x0_ = sub.x_begin;
  c.L_ = sub.x_end;

  c.grid_.reserve(static_cast<std::size_t>(grid_points));
  double min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    double x = c.x0_ + (c.L_ - c.x0_) * i / (grid_points - 1);
    LinearizedCoeffs::GridRow row;
    row.x = x;
    row.nbar = c.nbar(x);
    row.ubar = c.ubar(x);
    row.Ebar = c.Ebar(x);
    row.dx_ubar = c.dx_ubar(x);
    row.dx_ubar_sq = c.dx_ubar_sq(x);
    min_margin = std::min(min_margin, 1.0 - row.ubar * row.ubar);
    c.grid_.push_back(row);
  }
  if (!(min_margin > 0.0))
    throw DomainError("linearized_coeffs: branch touches the sonic line (1 - ubar^2 <= 0)");
  c.min_one_minus_usq_ = min_margin;

  double u0 = c.ubar(c.x0_);
  c.xi1_ = 2.0 * u0 / (1.0 - u0 * u0);
  c.omega1_ = c.Ebar(c.x0_) / (1.0 - u0 * u0);
  return c;
}

double shoot_initial_slope(const LinearizedCoeffs& coeffs, double nu, double gamma) {
  double u0 = coeffs.ubar(coeffs.x0());
  double E0 = coeffs.Ebar(coeffs.x0());
  return 2.0 * u0 / (1.0 - u0 * u0) * (E0 / (2.0 * u0) + nu) * gamma;
}

ShotResult shoot_mode(const LinearizedCoeffs& coeffs, double nu, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("shoot_mode: gamma must be positive");

  odeint::IvpSpec spec;
  spec.start = coeffs.x0();
  spec.stop = coeffs.L();
  spec.y0 = Vector(2);
  spec.y0[0] = gamma;
  spec.y0[1] = shoot_initial_slope(coeffs, nu, gamma);
  spec.rtol = 1e-11;
  spec.atol = 1e-13;
  spec.rhs = [&coeffs, nu](double x, const Vector& y, Vector& dy) {
    double u = coeffs.ubar(x);
    double one_musq = 1.0 - u * u;
    double c1 = coeffs.dx_ubar_sq(x) + 2.0 * nu * u + coeffs.Ebar(x);
    double c0 = nu * nu + 2.0 * nu * coeffs.dx_ubar(x) + coeffs.alpha() * nu +
                coeffs.nbar(x);
    dy[0] = y[1];
    dy[1] = (c1 * y[1] + c0 * y[0]) / one_musq;
  };

  odeint::DenseTrajectory traj = odeint::integrate(spec);
  double UxL = traj.y_end()[1];
  return ShotResult{std::move(traj), UxL};
}

ModeSearchResult find_growth_rate(const LinearizedCoeffs& coeffs, double gamma,
                                  double tol, int stations) {
  double E0 = coeffs.Ebar(coeffs.x0());
  if (!(E0 < 0.0))
    throw DomainError("find_growth_rate: requires a negative field at the shock, "
                      "Ebar(x0) < 0; got " + std::to_string(E0));

  const double nu_hi_full = coeffs.nu_max();
  const double off = std::max(1e-9, 1e-9 * nu_hi_full);
  const double nu_lo = off, nu_hi = nu_hi_full - off;

  auto residual_at = [&](double nu, double x_m, ShotResult* keep) {
    ShotResult shot = shoot_mode(coeffs, nu, gamma);
    double r = shot.trajectory.sample(x_m)[1];
    if (keep) *keep = std::move(shot);
    return r;
  };

  ModeSearchResult result;
  // station scan: the full Neumann problem at L first, then inward
  for (int j = 0; j <= stations; ++j) {
    double x_m = coeffs.L() - (coeffs.L() - coeffs.x0()) * j / (stations + 1);
    double r_lo = residual_at(nu_lo, x_m, nullptr);
    double r_hi = residual_at(nu_hi, x_m, nullptr);
    if (r_lo * r_hi > 0.0) continue;

    double lo = nu_lo, hi = nu_hi;
    ShotResult shot = shoot_mode(coeffs, lo, gamma);
    double best_nu = lo;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      double mid = 0.5 * (lo + hi);
      double r_mid = residual_at(mid, x_m, &shot);
      best_nu = mid;
      if ((r_lo <= 0.0) == (r_mid <= 0.0)) {
        lo = mid;
        r_lo = r_mid;
      } else {
        hi = mid;
      }
    }

    InstabilityMode mode;
    mode.nu = best_nu;
    mode.gamma = gamma;
    mode.matching_station = x_m;
    mode.bracket = {nu_lo, nu_hi};
    const int samples = 257;
    mode.xs.resize(samples);
    mode.U.resize(samples);
    double max_abs = 0.0;
    for (int i = 0; i < samples; ++i) {
      double x = coeffs.x0() + (coeffs.L() - coeffs.x0()) * i / (samples - 1);
      mode.xs[i] = x;
      mode.U[i] = shot.trajectory.sample(x)[0];
      max_abs = std::max(max_abs, std::abs(mode.U[i]));
    }
    mode.max_abs_U = max_abs;
    mode.residual_at_station = std::abs(shot.trajectory.sample(x_m)[1]);
    result.mode = std::move(mode);
    return result;
  }

  result.no_mode_reason =
      "no sign change of U_x at any matching station over the admissible bracket";
  return result;
}

ModeResiduals verify_mode(const LinearizedCoeffs& coeffs, const InstabilityMode& mode,
                          const ShotResult& shot, int samples) {
  const double nu = mode.nu;
  const double x0 = coeffs.x0();
  const double x_m = mode.matching_station;
  const double h = (x_m - x0) / (samples - 1);

  // independent residual route: U from the shot, derivatives by 4th-order
  // finite differences rather than the shooting right-hand side
  Vector U(samples);
  for (int i = 0; i < samples; ++i) U[i] = shot.trajectory.sample(x0 + h * i)[0];
  Vector Ux = gridfd::deriv1(U, h);
  Vector Uxx = gridfd::deriv2(U, h);

  double res_sup = 0.0, scale = 0.0;
  for (int i = 0; i < samples; ++i) {
    double x = x0 + h * i;
    double u = coeffs.ubar(x);
    double du = coeffs.dx_ubar(x);
    double dusq = coeffs.dx_ubar_sq(x);
    double n = coeffs.nbar(x);
    double E = coeffs.Ebar(x);
    // nu^2 U - d_x((1-u^2)U_x) + 2 nu d_x(u U) + n U + E U_x + alpha nu U
    double t1 = nu * nu * U[i];
    double t2 = -((1.0 - u * u) * Uxx[i] - dusq * Ux[i]);
    double t3 = 2.0 * nu * (du * U[i] + u * Ux[i]);
    double t4 = n * U[i];
    double t5 = E * Ux[i];
    double t6 = coeffs.alpha() * nu * U[i];
    double r = t1 + t2 + t3 + t4 + t5 + t6;
    double s = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) +
               std::abs(t5) + std::abs(t6);
    res_sup = std::max(res_sup, std::abs(r));
    scale = std::max(scale, s);
  }

  // x0 boundary relation of the linearized problem: V_t = ((1-u^2)/(2u))V_x
  // - (E/(2u))V, with V = e^{nu t}U, evaluated at t = 0
  double u0 = coeffs.ubar(x0);
  double E0 = coeffs.Ebar(x0);
  double U0 = shot.trajectory.sample(x0)[0];
  double Ux0 = shot.trajectory.sample(x0)[1];
  double bres = std::abs(nu * U0 - (1.0 - u0 * u0) / (2.0 * u0) * Ux0 +
                         E0 / (2.0 * u0) * U0);

  ModeResiduals out;
  out.interior_sup = scale > 0.0 ? res_sup / scale : res_sup;
  out.boundary_defect_x0 = bres;
  out.terminal_defect = mode.residual_at_station / std::max(mode.max_abs_U, 1e-300);
  out.growth_factor = std::exp(nu);
  return out;
}

}  // namespace transonic::stability
