#ifndef TRANSONIC_SMOOTH_HPP
#define TRANSONIC_SMOOTH_HPP

#include <memory>
#include <optional>
#include <vector>

#include "transonic/model.hpp"
#include "transonic/odeint.hpp"
#include "transonic/types.hpp"

// Construction of C1-smooth transonic steady-states through the sonic line.
// The independent variable near the sonic line is the density n: the x-form
// of the steady system is singular at n = J, while the (Etilde, x)-in-n form
// is regular there because Wtilde(J) = k != 0.

namespace transonic::smooth {

enum class Direction { SupToSub, SubToSup };
enum class Method { Auto, Ode, ClosedForm };

/// Record of the sonic crossing of an assembled solution.
struct SonicCrossing {
  double x0;
  double E_at;        // equals alpha up to tolerance
  double E_slope_at;  // equals J - b0 up to tolerance
  double n_slope_at;
  double k_used;
  Direction direction;
};

/// Trajectory of the transformed field Etilde(n) = E - alpha*J/n over a
/// density window containing J, with the removable singularity of
/// Wtilde = Etilde/(n - J) filled by the sonic slope k.
class TildeTrajectory {
 public:
  double etilde(double n) const;
  double wtilde(double n) const;  // k at n = J
  /// x(n) relative to the sonic point: x_rel(J) = 0, dx/dn = (n+J)/(n^3 Wtilde).
  double x_rel(double n) const;

  double n_lo() const { return n_lo_; }
  double n_hi() const { return n_hi_; }
  double k() const { return k_; }
  double b0() const { return b0_; }
  const FlowParams& params() const { return params_; }
  Direction direction() const { return direction_; }
  Method method() const { return method_; }
  double seed_offset() const { return eps0_; }

 private:
  friend TildeTrajectory build_tilde_trajectory(const FlowParams&, double, Direction,
                                                double, double, Method, double);
  TildeTrajectory(const FlowParams& p, double b0) : params_(p), b0_(b0) {}

  FlowParams params_;
  double b0_;
  double k_ = 0.0;
  double n_lo_ = 0.0, n_hi_ = 0.0;
  double eps0_ = 0.0;
  Direction direction_ = Direction::SupToSub;
  Method method_ = Method::Auto;
  // ODE route: dense trajectories of (Etilde, x_rel) on each side of J
  std::optional<odeint::DenseTrajectory> below_, above_;
};

/// Integrates dEtilde/dn = (n+J)(n-b0)/(n^3 Wtilde) + alpha*J/n^2 outward
/// from n = J in both directions, seeded at n = J +- eps0 with
/// Etilde = k * (+-eps0). With Method::ClosedForm (the alpha = 0 default)
/// the explicit first integral E = sign(n-J) sqrt(g(n)) is used instead.
TildeTrajectory build_tilde_trajectory(const FlowParams& params, double b0,
                                       Direction direction, double n_lo, double n_hi,
                                       Method method = Method::Auto,
                                       double eps0_factor = 1e-6);

/// Monotone map n -> x anchored at (n_anchor, x_anchor).
double x_of_n(const TildeTrajectory& traj, double n, double n_anchor, double x_anchor);

struct InitialData {
  double n0;  // supersonic, 0 < n0 < J
};
struct BoundaryPair {
  double n_l;  // supersonic
  double n_r;  // subsonic target at x = L
};

/// Assembled C1 solution over [0, L]. Evaluation anywhere in the span goes
/// through the monotone inversion of x(n).
class SmoothSolution {
 public:
  double n_at(double x) const;
  double E_at(double x) const;
  double n_x_at(double x) const;
  double E_x_at(double x) const;

  const SonicCrossing& crossing() const { return crossing_; }
  const TildeTrajectory& trajectory() const { return *traj_; }
  double x_end() const { return x_end_; }
  double E0() const { return E_at(0.0); }
  /// Existence hypothesis E0 < min(alpha, alpha*J/n0), reported not enforced.
  bool initial_field_admissible() const;
  std::optional<double> achieved_n_r;  // set for BoundaryPair seeds

  SolutionBranch sample_branch(int count) const;

 private:
  friend SmoothSolution assemble_smooth_solution(const FlowParams&, double, InitialData,
                                                 Method);
  friend SmoothSolution assemble_smooth_solution(const FlowParams&, double, BoundaryPair,
                                                 Method);
  SmoothSolution(TildeTrajectory traj, SonicCrossing c)
      : traj_(std::make_shared<TildeTrajectory>(std::move(traj))), crossing_(c) {}

  double n_of_x(double x) const;

  std::shared_ptr<TildeTrajectory> traj_;
  SonicCrossing crossing_;
  double n_begin_ = 0.0;  // n at x = 0
  double n_end_ = 0.0;    // n at x = x_end
  double x_end_ = 0.0;
};

SmoothSolution assemble_smooth_solution(const FlowParams& params, double b0,
                                        InitialData seed, Method method = Method::Auto);
SmoothSolution assemble_smooth_solution(const FlowParams& params, double b0,
                                        BoundaryPair seed, Method method = Method::Auto);

/// Structural-stability probe for pairs of smooth solutions (constant doping).
struct ProbeCase {
  double b0;
  double n0;
};

struct ProbeReport {
  double delta0;       // |b1-b2| + |n10-n20| + |E10-E20|
  double n_c1_norm;    // ||n1-n2||_{C1[0,L]}
  double E_c2_norm;    // ||E1-E2||_{C2[0,L]}
  double ratio;        // (n_c1_norm + E_c2_norm) / delta0, inf convention at 0
};

ProbeReport stability_probe_smooth(const FlowParams& params, ProbeCase case1,
                                   ProbeCase case2, int grid_points = 2048,
                                   Method method = Method::Auto);

}  // namespace transonic::smooth

#endif  // TRANSONIC_SMOOTH_HPP
