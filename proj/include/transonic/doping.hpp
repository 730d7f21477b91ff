#ifndef TRANSONIC_DOPING_HPP
#define TRANSONIC_DOPING_HPP

#include <vector>

#include "transonic/types.hpp"

namespace transonic {

/// Background charge profile b(x). Either a constant b0 or a table of
/// strictly increasing knots interpolated with a monotone (Fritsch-Carlson)
/// cubic, so the interpolant introduces no spurious regime flips between
/// knots.
class DopingProfile {
 public:
  enum class Kind { Constant, Tabulated };

  static DopingProfile constant(double b0);
  static DopingProfile tabulated(std::vector<double> knots, std::vector<double> values);

  /// Samples base(x) + eps * delta(x) on a uniform knot grid over [x_lo, x_hi].
  /// Constant + constant collapses back to a Constant profile.
  static DopingProfile perturbed(const DopingProfile& base, const DopingProfile& delta,
                                 double eps, double x_lo, double x_hi,
                                 int knot_count = 1025);

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  double constant_value() const;

  double operator()(double x) const;

  /// sup over [x_lo, x_hi] of b < J, sampled densely.
  bool supersonic_over(double x_lo, double x_hi, double J) const;

  double min_over(double x_lo, double x_hi) const;
  double max_over(double x_lo, double x_hi) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

 private:
  DopingProfile() = default;

  Kind kind_ = Kind::Constant;
  double b0_ = 0.0;
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;  // Fritsch-Carlson endpoint slopes per knot
};

}  // namespace transonic

#endif  // TRANSONIC_DOPING_HPP
