#ifndef TRANSONIC_ODEINT_HPP
#define TRANSONIC_ODEINT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "transonic/types.hpp"

// Explicit adaptive Dormand-Prince 5(4) integrator with continuous (dense)
// output and scalar event detection. Direction of integration follows
// sign(stop - start).

namespace transonic::odeint {

using Rhs = std::function<void(double x, const Vector& y, Vector& dydx)>;
using EventFn = std::function<double(double x, const Vector& y)>;

struct Event {
  EventFn fn;
  int direction = 0;    // +1: crossing upward, -1: downward, 0: any
  bool terminal = true;
};

struct IvpSpec {
  Rhs rhs;
  double start = 0.0;
  double stop = 1.0;
  Vector y0;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::vector<Event> events;
  double max_step = std::numeric_limits<double>::infinity();
  double first_step = 0.0;  // 0 = automatic
};

enum class Termination { ReachedStop, Event, StepFailure };

struct EventHit {
  double x;
  std::size_t event_id;
  Vector y;
};

class IntegrationError : public SolverError {
 public:
  IntegrationError(std::string kind, const std::string& what, double x_last, Vector y_last)
      : SolverError(std::move(kind), what), x_last(x_last), y_last(std::move(y_last)) {}
  double x_last;
  Vector y_last;
};

/// One accepted step with the quartic interpolation coefficients of the
/// DOPRI5 dense output.
struct DenseStep {
  double x0;
  double h;
  Vector r1, r2, r3, r4, r5;
};

class DenseTrajectory {
 public:
  double x_begin() const { return steps_.front().x0; }
  double x_end() const { return x_final_; }
  Termination termination() const { return termination_; }
  const std::vector<EventHit>& event_hits() const { return event_hits_; }
  const std::vector<DenseStep>& steps() const { return steps_; }
  const Vector& y_end() const { return y_end_; }

  Vector sample(double x) const {
    const DenseStep& s = locate(x);
    double th = (x - s.x0) / s.h;
    double th1 = 1.0 - th;
    return s.r1 + th * (s.r2 + th1 * (s.r3 + th * (s.r4 + th1 * s.r5)));
  }

  /// d/dx of the dense-output interpolant.
  Vector sample_derivative(double x) const {
    const DenseStep& s = locate(x);
    double th = (x - s.x0) / s.h;
    Vector p = s.r2 + (1.0 - 2.0 * th) * s.r3 + th * (2.0 - 3.0 * th) * s.r4 +
               th * (2.0 - 6.0 * th + 4.0 * th * th) * s.r5;
    return p / s.h;
  }

  std::vector<Vector> sample_many(const std::vector<double>& xs) const {
    std::vector<Vector> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(sample(x));
    return out;
  }

 private:
  friend DenseTrajectory integrate(const IvpSpec&);

  const DenseStep& locate(double x) const {
    double lo = std::min(x_begin(), x_end());
    double hi = std::max(x_begin(), x_end());
    double pad = 1e-12 * (1.0 + hi - lo);
    if (x < lo - pad || x > hi + pad)
      throw DomainError("DenseTrajectory: sample outside integrated span");
    // steps are ordered in integration direction
    bool fwd = steps_.front().h > 0.0;
    std::size_t lo_i = 0, hi_i = steps_.size();
    while (hi_i - lo_i > 1) {
      std::size_t mid = (lo_i + hi_i) / 2;
      bool left = fwd ? (x >= steps_[mid].x0) : (x <= steps_[mid].x0);
      if (left) lo_i = mid;
      else hi_i = mid;
    }
    return steps_[lo_i];
  }

  std::vector<DenseStep> steps_;
  std::vector<EventHit> event_hits_;
  Termination termination_ = Termination::ReachedStop;
  Vector y_end_;
  double x_final_ = 0.0;
};

namespace detail {
// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;
}  // namespace detail

inline DenseTrajectory integrate(const IvpSpec& spec) {
  using namespace detail;
  if (!(spec.rtol > 0.0 && spec.atol > 0.0))
    throw ConfigError("integrate: rtol and atol must be positive");
  if (spec.start == spec.stop) throw ConfigError("integrate: start == stop");

  const double dir = spec.stop > spec.start ? 1.0 : -1.0;
  const std::size_t dim = static_cast<std::size_t>(spec.y0.size());
  const double span = std::abs(spec.stop - spec.start);

  auto check_finite = [&](const Vector& v, double x, const Vector& y_last) {
    if (!v.allFinite())
      throw IntegrationError("rhs", "integrate: rhs returned non-finite value near x = " +
                             std::to_string(x), x, y_last);
  };

  Vector y = spec.y0;
  double x = spec.start;
  Vector k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ytmp(dim);
  spec.rhs(x, y, k1);
  check_finite(k1, x, y);

  // initial step heuristic
  double h;
  if (spec.first_step > 0.0) {
    h = spec.first_step;
  } else {
    double d0 = y.cwiseAbs().maxCoeff() + spec.atol;
    double d1n = k1.cwiseAbs().maxCoeff() + spec.atol;
    h = 0.01 * d0 / d1n;
    h = std::min({h, span / 10.0, spec.max_step});
    h = std::max(h, 1e4 * std::numeric_limits<double>::epsilon() * span);
  }
  h = std::min(h, spec.max_step);

  DenseTrajectory traj;
  std::vector<double> ev_prev(spec.events.size());
  for (std::size_t i = 0; i < spec.events.size(); ++i)
    ev_prev[i] = spec.events[i].fn(x, y);

  const double err_exp = 0.2, beta = 0.04;
  double err_old = 1e-4;
  bool done = false;
  int reject_streak = 0;

  while (!done) {
    if ((x + dir * h - spec.stop) * dir > 0.0) {
      h = std::abs(spec.stop - x);
      done = true;
    }
    if (h < 1e2 * std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0))
      throw IntegrationError("singularity",
                             "integrate: step size underflow at x = " + std::to_string(x), x, y);
    const double hd = dir * h;

    ytmp = y + hd * (a21 * k1);
    spec.rhs(x + c2 * hd, ytmp, k2);
    ytmp = y + hd * (a31 * k1 + a32 * k2);
    spec.rhs(x + c3 * hd, ytmp, k3);
    ytmp = y + hd * (a41 * k1 + a42 * k2 + a43 * k3);
    spec.rhs(x + c4 * hd, ytmp, k4);
    ytmp = y + hd * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    spec.rhs(x + c5 * hd, ytmp, k5);
    ytmp = y + hd * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    spec.rhs(x + hd, ytmp, k6);
    Vector ynew = y + hd * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    spec.rhs(x + hd, ynew, k7);
    check_finite(k7, x + hd, y);
    if (!ynew.allFinite())
      throw IntegrationError("rhs", "integrate: non-finite state near x = " +
                             std::to_string(x + hd), x, y);

    Vector errv = hd * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double sc = spec.atol + spec.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double r = errv[i] / sc;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(dim));

    if (err <= 1.0) {
      // accept: build dense coefficients
      DenseStep s;
      s.x0 = x;
      s.h = hd;
      s.r1 = y;
      s.r2 = ynew - y;
      s.r3 = hd * k1 - s.r2;
      s.r4 = s.r2 - hd * k7 - s.r3;
      s.r5 = hd * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      traj.steps_.push_back(s);

      double x_new = x + hd;
      traj.x_final_ = x_new;
      // event detection over the accepted step
      bool stop_at_event = false;
      double x_ev_stop = x_new;
      for (std::size_t i = 0; i < spec.events.size(); ++i) {
        double g0 = ev_prev[i];
        double g1 = spec.events[i].fn(x_new, ynew);
        int want = spec.events[i].direction;
        bool crossed = (g0 < 0.0 && g1 >= 0.0 && want >= 0) ||
                       (g0 > 0.0 && g1 <= 0.0 && want <= 0);
        if (crossed) {
          double lo = x, hi = x_new;
          double glo = g0;
          for (int it = 0; it < 120 && std::abs(hi - lo) >
               1e-15 * (std::abs(hi) + 1.0); ++it) {
            double mid = 0.5 * (lo + hi);
            double gm = spec.events[i].fn(mid, traj.sample(mid));
            if ((glo <= 0.0) == (gm <= 0.0)) {
              lo = mid;
              glo = gm;
            } else {
              hi = mid;
            }
          }
          double x_hit = 0.5 * (lo + hi);
          traj.event_hits_.push_back({x_hit, i, traj.sample(x_hit)});
          if (spec.events[i].terminal) {
            stop_at_event = true;
            x_ev_stop = std::min(x_ev_stop * dir, x_hit * dir) * dir;
          }
        }
        ev_prev[i] = g1;
      }
      if (stop_at_event) {
        // truncate the last step at the first terminal event
        // the last full step stays; only the reported endpoint moves back
        traj.x_final_ = x_ev_stop;
        traj.y_end_ = traj.sample(x_ev_stop);
        traj.termination_ = Termination::Event;
        return traj;
      }

      x = x_new;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      reject_streak = 0;

      double fac = std::pow(err > 1e-30 ? err : 1e-30, -err_exp) *
                   std::pow(err_old, beta);
      fac = std::clamp(0.9 * fac, 0.2, 5.0);
      err_old = std::max(err, 1e-4);
      h = std::min(h * fac, spec.max_step);
    } else {
      done = false;
      ++reject_streak;
      double fac = std::clamp(0.9 * std::pow(err, -err_exp), 0.1, 1.0);
      h *= fac;
      if (reject_streak > 200)
        throw IntegrationError("singularity",
                               "integrate: repeated step rejection at x = " +
                               std::to_string(x), x, y);
    }
  }

  traj.y_end_ = y;
  traj.x_final_ = x;
  traj.termination_ = Termination::ReachedStop;
  return traj;
}

}  // namespace transonic::odeint

#endif  // TRANSONIC_ODEINT_HPP
