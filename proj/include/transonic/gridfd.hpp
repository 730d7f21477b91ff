#ifndef TRANSONIC_GRIDFD_HPP
#define TRANSONIC_GRIDFD_HPP

#include "transonic/types.hpp"

// Fourth-order finite-difference stencils on uniform grids, with one-sided
// closures at the edges. Used for the discrete C1/C2 norms of the
// structural-stability probes.

namespace transonic::gridfd {

/// First derivative, 4th order.
inline Vector deriv1(const Vector& f, double h) {
  const Eigen::Index m = f.size();
  if (m < 6) throw DomainError("gridfd::deriv1: need at least 6 points");
  Vector d(m);
  d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
  d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
  for (Eigen::Index i = 2; i < m - 2; ++i)
    d[i] = (-f[i + 2] + 8 * f[i + 1] - 8 * f[i - 1] + f[i - 2]) / (12 * h);
  d[m - 2] = (3 * f[m - 1] + 10 * f[m - 2] - 18 * f[m - 3] + 6 * f[m - 4] - f[m - 5]) / (12 * h);
  d[m - 1] = (25 * f[m - 1] - 48 * f[m - 2] + 36 * f[m - 3] - 16 * f[m - 4] + 3 * f[m - 5]) / (12 * h);
  return d;
}

/// Second derivative, 4th order.
inline Vector deriv2(const Vector& f, double h) {
  const Eigen::Index m = f.size();
  if (m < 7) throw DomainError("gridfd::deriv2: need at least 7 points");
  const double h2 = h * h;
  Vector d(m);
  d[0] = (45 * f[0] - 154 * f[1] + 214 * f[2] - 156 * f[3] + 61 * f[4] - 10 * f[5]) / (12 * h2);
  d[1] = (10 * f[0] - 15 * f[1] - 4 * f[2] + 14 * f[3] - 6 * f[4] + f[5]) / (12 * h2);
  for (Eigen::Index i = 2; i < m - 2; ++i)
    d[i] = (-f[i + 2] + 16 * f[i + 1] - 30 * f[i] + 16 * f[i - 1] - f[i - 2]) / (12 * h2);
  d[m - 2] = (10 * f[m - 1] - 15 * f[m - 2] - 4 * f[m - 3] + 14 * f[m - 4] - 6 * f[m - 5] + f[m - 6]) / (12 * h2);
  d[m - 1] = (45 * f[m - 1] - 154 * f[m - 2] + 214 * f[m - 3] - 156 * f[m - 4] + 61 * f[m - 5] - 10 * f[m - 6]) / (12 * h2);
  return d;
}

inline double sup_norm(const Vector& f) { return f.cwiseAbs().maxCoeff(); }

}  // namespace transonic::gridfd

#endif  // TRANSONIC_GRIDFD_HPP
