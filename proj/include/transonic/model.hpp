#ifndef TRANSONIC_MODEL_HPP
#define TRANSONIC_MODEL_HPP

#include <cmath>
#include <utility>

#include "transonic/doping.hpp"
#include "transonic/types.hpp"

// Closed-form quantities of the steady Euler-Poisson flow with isothermal
// pressure P(n) = n. The sonic line is n = J; the flow is supersonic for
// 0 < n < J and subsonic for n > J.

namespace transonic::model {

inline constexpr double kDefaultSonicTolFactor = 1e-9;  // eps_sonic = 1e-9 * J

template <typename Scalar>
Regime classify_regime(Scalar n, const FlowParams& params, Scalar eps) {
  if (!(n > Scalar(0))) throw InvalidStateError("classify_regime: density must be positive");
  if (eps < Scalar(0)) throw InvalidStateError("classify_regime: tolerance must be >= 0");
  const Scalar J = Scalar(params.J);
  if (n < J - eps) return Regime::Supersonic;
  if (n > J + eps) return Regime::Subsonic;
  return Regime::Sonic;
}

inline Regime classify_regime(double n, const FlowParams& params) {
  return classify_regime(n, params, kDefaultSonicTolFactor * params.J);
}

enum class SonicBranch { Plus, Minus };

/// Limiting slope k of the trajectory dEtilde/dn at the sonic point,
/// k = (alpha/J +- sqrt((alpha/J)^2 + 8(J-b0)/J^2)) / 2.
/// The supersonic-to-subsonic trajectory takes the Plus root.
template <typename Scalar>
Scalar sonic_slope_k(const FlowParams& params, Scalar b0, SonicBranch branch) {
  const Scalar J = Scalar(params.J);
  const Scalar a = Scalar(params.alpha);
  if (!(b0 > Scalar(0) && b0 < J))
    throw DomainError("sonic_slope_k: requires supersonic doping 0 < b0 < J");
  using std::sqrt;
  const Scalar disc = sqrt((a / J) * (a / J) + Scalar(8) * (J - b0) / (J * J));
  return Scalar(0.5) * (a / J + (branch == SonicBranch::Plus ? disc : -disc));
}

/// alpha = 0 trajectory invariant: E^2 = g(n) along the smooth transonic
/// solution, normalized so g(J) = 0.
template <typename Scalar>
Scalar g_of_n(Scalar n, const FlowParams& params, Scalar b0) {
  const Scalar J = Scalar(params.J);
  using std::log;
  const Scalar C0 = b0 * log(J) + b0 / Scalar(2) - Scalar(2) * J;
  return Scalar(2) * n - Scalar(2) * b0 * log(n) + Scalar(2) * J * J / n -
         b0 * J * J / (n * n) + Scalar(2) * C0;
}

template <typename Scalar>
Scalar dg_dn(Scalar n, const FlowParams& params, Scalar b0) {
  const Scalar J = Scalar(params.J);
  return Scalar(2) - Scalar(2) * b0 / n - Scalar(2) * J * J / (n * n) +
         Scalar(2) * b0 * J * J / (n * n * n);
}

/// Third derivative of g; the integrand of the Taylor integral remainder.
template <typename Scalar>
Scalar h_of(Scalar n, Scalar b0, const FlowParams& params) {
  const Scalar J = Scalar(params.J);
  return -Scalar(4) / (n * n * n) *
         (b0 + Scalar(3) * J * J / n - Scalar(6) * b0 * J * J / (n * n));
}

/// Signed trajectory field E(n) = sign(n - J) sqrt(g(n)) for alpha = 0.
double trajectory_field(double n, const FlowParams& params, double b0);

/// Slope factor W(n, b0) of the factorization E(n) = (n - J) W(n, b0),
/// evaluated through the Taylor integral remainder with a fixed 16-point
/// Gauss-Legendre rule on t in [0, 1].
double W_of(double n, double b0, const FlowParams& params);

/// Zero of g (alpha = 0) or of the integrated Etilde (handled by the smooth
/// module) below J, located by bisection to 1e-12 absolute.
double n_star(const FlowParams& params, double b0);

/// Jump map: the unique subsonic density with equal momentum flux,
/// S(n) = J^2 / n.
template <typename Scalar>
Scalar shock_map_S(Scalar n, const FlowParams& params) {
  const Scalar J = Scalar(params.J);
  if (!(n > Scalar(0) && n < J))
    throw DomainError("shock_map_S: entropy requires a supersonic state 0 < n < J");
  return J * J / n;
}

/// Momentum flux n + J^2/n, invariant across an admissible jump.
template <typename Scalar>
Scalar momentum_flux(Scalar n, const FlowParams& params) {
  const Scalar J = Scalar(params.J);
  return n + J * J / n;
}

/// (flux defect, field defect) of a candidate jump.
std::pair<double, double> rh_residuals(const State& left, const State& right,
                                       const FlowParams& params);

/// Desingularizing factor f(n) = (n^2 - J^2) / n^3; vanishes on the sonic
/// line with the sign of n - J.
template <typename Scalar>
Scalar desingularizing_factor_f(Scalar n, const FlowParams& params) {
  const Scalar J = Scalar(params.J);
  if (!(n > Scalar(0))) throw InvalidStateError("desingularizing_factor_f: n must be positive");
  return (n * n - J * J) / (n * n * n);
}

}  // namespace transonic::model

#endif  // TRANSONIC_MODEL_HPP
