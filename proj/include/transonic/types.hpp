#ifndef TRANSONIC_TYPES_HPP
#define TRANSONIC_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace transonic {

using Vector = Eigen::VectorXd;

/// Base class for all solver errors; carries a machine-readable kind tag.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class InvalidStateError : public SolverError {
 public:
  explicit InvalidStateError(const std::string& what)
      : SolverError("invalid-state", what) {}
};

class DomainError : public SolverError {
 public:
  explicit DomainError(const std::string& what)
      : SolverError("domain", what) {}
};

class ConfigError : public SolverError {
 public:
  explicit ConfigError(const std::string& what)
      : SolverError("config", what) {}
};

/// Global constants of the steady flow.
/// alpha = 1/tau; alpha = 0 encodes the relaxation-free limit tau = inf.
struct FlowParams {
  double J;      // current density, > 0
  double alpha;  // inverse relaxation time, >= 0
  double L;      // domain length, > 0

  FlowParams(double J_, double alpha_, double L_) : J(J_), alpha(alpha_), L(L_) {
    if (!(J > 0.0)) throw ConfigError("FlowParams: J must be positive");
    if (!(alpha >= 0.0)) throw ConfigError("FlowParams: alpha must be nonnegative");
    if (!(L > 0.0)) throw ConfigError("FlowParams: L must be positive");
  }

  static FlowParams with_tau(double J_, double tau, double L_) {
    if (!(tau > 0.0)) throw ConfigError("FlowParams: tau must be positive");
    return FlowParams(J_, 1.0 / tau, L_);
  }
};

enum class Regime { Supersonic, Sonic, Subsonic };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Supersonic: return "sup";
    case Regime::Sonic: return "sonic";
    case Regime::Subsonic: return "sub";
  }
  return "?";
}

/// Point state of the steady flow.
struct State {
  double x;
  double n;  // density, > 0
  double E;  // electric field
};

/// Record of a transonic jump at x_s. The field is continuous across the
/// shock, so a single E value is stored.
struct JumpRecord {
  double x_s;
  double n_minus;
  double n_plus;
  double E_value;
  double rh_residual;  // |(n- + J^2/n-) - (n+ + J^2/n+)|
  bool entropy_ok;     // 0 < n- < J < n+
};

/// Monotone-in-x samples of (x, n, E) with derivative data.
struct BranchSample {
  double x;
  double n;
  double E;
  double n_x;
  double E_x;
  Regime regime;
};

struct SolutionBranch {
  std::vector<BranchSample> samples;

  double x_begin() const { return samples.front().x; }
  double x_end() const { return samples.back().x; }
};

}  // namespace transonic

#endif  // TRANSONIC_TYPES_HPP
