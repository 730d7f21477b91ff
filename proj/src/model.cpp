#include "transonic/model.hpp"

#include <array>
#include <cmath>

namespace transonic::model {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGLNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGLWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

double gauss16_01(const auto& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    double tp = 0.5 * (1.0 + kGLNodes[i]);
    double tm = 0.5 * (1.0 - kGLNodes[i]);
    acc += kGLWeights[i] * (f(tp) + f(tm));
  }
  return 0.5 * acc;
}

}  // namespace

double trajectory_field(double n, const FlowParams& params, double b0) {
  double g = g_of_n(n, params, b0);
  if (g < 0.0) {
    // clip tiny negative round-off near the zeros of g
    if (g > -1e-14 * (1.0 + std::abs(n))) g = 0.0;
    else throw DomainError("trajectory_field: g(n) < 0 at n = " + std::to_string(n));
  }
  return (n >= params.J ? 1.0 : -1.0) * std::sqrt(g);
}

double W_of(double n, double b0, const FlowParams& params) {
  const double J = params.J;
  if (!(params.alpha == 0.0))
    throw DomainError("W_of: closed form only defined for alpha = 0");
  if (!(b0 > 0.0 && b0 < J))
    throw DomainError("W_of: requires supersonic doping 0 < b0 < J");
  const double lead = 2.0 * (J - b0) / (J * J);
  const double remainder = gauss16_01([&](double t) {
    double s = 1.0 - t;
    return s * s * h_of(J + t * (n - J), b0, params);
  });
  const double radicand = lead + 0.5 * (n - J) * remainder;
  if (!(radicand > 0.0))
    throw DomainError("W_of: radicand <= 0 at n = " + std::to_string(n));
  return std::sqrt(radicand);
}

double n_star(const FlowParams& params, double b0) {
  if (!(b0 > 0.0 && b0 < params.J))
    throw DomainError("n_star: requires supersonic doping 0 < b0 < J");
  // g(J) = 0 with g > 0 just below J (double zero factored out), g -> +inf
  // as n -> 0+; the lower zero n_* sits where the (n-J)^2 W^2 factorization
  // breaks down. Bracket [lo, J) by scanning down for a sign change of g.
  const double J = params.J;
  double hi = J * (1.0 - 1e-6);
  double lo = hi;
  double g_hi = g_of_n(hi, params, b0);
  for (int i = 0; i < 200; ++i) {
    lo = hi * 0.9;
    double g_lo = g_of_n(lo, params, b0);
    if (g_lo <= 0.0) break;
    hi = lo;
    g_hi = g_lo;
    if (lo < 1e-12 * J)
      throw DomainError("n_star: no zero of g found below J");
  }
  (void)g_hi;
  // bisection on g to 1e-12 absolute
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (g_of_n(mid, params, b0) > 0.0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> rh_residuals(const State& left, const State& right,
                                       const FlowParams& params) {
  double flux_defect =
      std::abs(momentum_flux(left.n, params) - momentum_flux(right.n, params));
  double field_defect = std::abs(left.E - right.E);
  return {flux_defect, field_defect};
}

}  // namespace transonic::model
