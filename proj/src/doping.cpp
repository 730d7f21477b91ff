#include "transonic/doping.hpp"

#include <algorithm>
#include <cmath>

namespace transonic {

DopingProfile DopingProfile::constant(double b0) {
  if (!(b0 > 0.0)) throw ConfigError("DopingProfile: b0 must be positive");
  DopingProfile p;
  p.kind_ = Kind::Constant;
  p.b0_ = b0;
  return p;
}

DopingProfile DopingProfile::tabulated(std::vector<double> knots,
                                       std::vector<double> values) {
  if (knots.size() < 2 || knots.size() != values.size())
    throw ConfigError("DopingProfile: need >= 2 matching knots/values");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1]))
      throw ConfigError("DopingProfile: knots must be strictly increasing");
  for (double v : values)
    if (!(v > 0.0)) throw ConfigError("DopingProfile: values must be positive");

  DopingProfile p;
  p.kind_ = Kind::Tabulated;
  p.knots_ = std::move(knots);
  p.values_ = std::move(values);

  // Fritsch-Carlson monotone cubic slopes.
  const auto& x = p.knots_;
  const auto& y = p.values_;
  const std::size_t m = x.size();
  std::vector<double> d(m - 1);  // secant slopes
  for (std::size_t i = 0; i + 1 < m; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);

  std::vector<double> s(m);
  s[0] = d[0];
  s[m - 1] = d[m - 2];
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      s[i] = 0.0;
    } else {
      // weighted harmonic mean keeps the interpolant monotone
      double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
      s[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  // clamp endpoint slopes (Fritsch-Carlson three-point rule simplified)
  if (d[0] == 0.0) s[0] = 0.0;
  else if (s[0] * d[0] < 0.0) s[0] = 0.0;
  else if (std::abs(s[0]) > 3.0 * std::abs(d[0])) s[0] = 3.0 * d[0];
  if (d[m - 2] == 0.0) s[m - 1] = 0.0;
  else if (s[m - 1] * d[m - 2] < 0.0) s[m - 1] = 0.0;
  else if (std::abs(s[m - 1]) > 3.0 * std::abs(d[m - 2])) s[m - 1] = 3.0 * d[m - 2];

  p.slopes_ = std::move(s);
  return p;
}

DopingProfile DopingProfile::perturbed(const DopingProfile& base,
                                       const DopingProfile& delta, double eps,
                                       double x_lo, double x_hi, int knot_count) {
  if (base.is_constant() && delta.is_constant())
    return constant(base.constant_value() + eps * delta.constant_value());
  if (eps == 0.0 && base.is_constant()) return base;

  std::vector<double> xs(static_cast<std::size_t>(knot_count));
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double t = static_cast<double>(i) / static_cast<double>(knot_count - 1);
    xs[i] = x_lo + t * (x_hi - x_lo);
    ys[i] = base(xs[i]) + eps * delta(xs[i]);
  }
  return tabulated(std::move(xs), std::move(ys));
}

double DopingProfile::constant_value() const {
  if (kind_ != Kind::Constant)
    throw DomainError("DopingProfile: not a constant profile");
  return b0_;
}

double DopingProfile::operator()(double x) const {
  if (kind_ == Kind::Constant) return b0_;
  const auto& xs = knots_;
  if (x <= xs.front()) return values_.front();
  if (x >= xs.back()) return values_.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  double h = xs[i + 1] - xs[i];
  double t = (x - xs[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] +
         h11 * h * slopes_[i + 1];
}

bool DopingProfile::supersonic_over(double x_lo, double x_hi, double J) const {
  return max_over(x_lo, x_hi) < J;
}

double DopingProfile::min_over(double x_lo, double x_hi) const {
  if (kind_ == Kind::Constant) return b0_;
  double m = operator()(x_lo);
  const int samples = 2048;
  for (int i = 1; i <= samples; ++i) {
    double x = x_lo + (x_hi - x_lo) * i / samples;
    m = std::min(m, operator()(x));
  }
  return m;
}

double DopingProfile::max_over(double x_lo, double x_hi) const {
  if (kind_ == Kind::Constant) return b0_;
  double m = operator()(x_lo);
  const int samples = 2048;
  for (int i = 1; i <= samples; ++i) {
    double x = x_lo + (x_hi - x_lo) * i / samples;
    m = std::max(m, operator()(x));
  }
  return m;
}

}  // namespace transonic
