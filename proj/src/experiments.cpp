#include "transonic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "json.hpp"
#include "transonic/gridfd.hpp"
#include "transonic/model.hpp"
#include "transonic/shock.hpp"
#include "transonic/smooth.hpp"
#include "transonic/stability.hpp"

namespace transonic::cli {

using json = nlohmann::ordered_json;

namespace {

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int m) {
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (m - 1);
  return out;
}

/// Collects the per-run files and writes the ReportBundle trailer
/// (manifest.json + checks.json) when finished.
class Bundle {
 public:
  Bundle(std::string experiment, const config::RunConfig& rc, const RunOptions& opts)
      : experiment_(std::move(experiment)), rc_(rc) {
    dir_ = opts.out_dir.empty() ? default_out_root() / experiment_ : opts.out_dir;
    std::filesystem::create_directories(dir_);
    formats_ = opts.format_override.empty() ? rc.formats : opts.format_override;
    tol_scale_ = opts.tol_scale_override > 0.0 ? opts.tol_scale_override : rc.tol_scale;
  }

  const std::filesystem::path& dir() const { return dir_; }
  double tol_scale() const { return tol_scale_; }
  bool wants(const std::string& fmt) const {
    return std::find(formats_.begin(), formats_.end(), fmt) != formats_.end();
  }

  std::filesystem::path file(const std::string& name) {
    outputs_.push_back(name);
    return dir_ / name;
  }

  void attach(const std::string& name, json j) { data_[name] = std::move(j); }

  /// Writes manifest.json and checks.json; prints the check list; returns
  /// the process exit code.
  int finish(const report::CheckList& checks) {
    json manifest;
    manifest["schema_version"] = 1;
    manifest["experiment"] = experiment_;
    manifest["version"] = "1.0.0";
    json cfg = json::object();
    for (const auto& [k, v] : rc_.raw.entries()) cfg[k] = v;
    manifest["config"] = cfg;
    manifest["config_text"] = rc_.raw.text();
    manifest["tolerances"] = {{"tol_scale", tol_scale_},
                              {"rtol", 1e-10},
                              {"atol", 1e-12}};
    manifest["outputs"] = outputs_;
    report::write_text(dir_ / "manifest.json", manifest.dump(2) + "\n");

    json jchecks = json::array();
    for (const auto& c : checks.checks()) {
      const char* st = c.status == report::CheckStatus::Pass   ? "pass"
                       : c.status == report::CheckStatus::Fail ? "fail"
                                                               : "warn";
      jchecks.push_back({{"name", c.name},
                         {"status", st},
                         {"value", c.value},
                         {"threshold", c.threshold},
                         {"note", c.note}});
    }
    json summary = {{"schema_version", 1}, {"experiment", experiment_}, {"checks", jchecks}};
    for (auto& [name, j] : data_) summary[name] = j;
    report::write_text(dir_ / "checks.json", summary.dump(2) + "\n");

    checks.print(std::cout);
    std::cout << (checks.all_passed() ? "RESULT: PASS" : "RESULT: FAIL") << "\n";
    return checks.all_passed() ? 0 : 3;
  }

 private:
  std::string experiment_;
  const config::RunConfig& rc_;
  std::filesystem::path dir_;
  std::vector<std::string> formats_;
  std::vector<std::string> outputs_;
  std::map<std::string, json> data_;
  double tol_scale_ = 1.0;
};

double require_constant_b0(const config::RunConfig& rc) {
  if (!rc.doping.is_constant())
    throw ConfigError("experiment requires a constant doping profile");
  return rc.doping.constant_value();
}

smooth::Method parse_method(const std::string& s) {
  if (s == "auto") return smooth::Method::Auto;
  if (s == "ode") return smooth::Method::Ode;
  if (s == "closed") return smooth::Method::ClosedForm;
  throw ConfigError("smooth.method must be auto, ode, or closed");
}

/// Builds the sonic-crossing trajectory of one direction, retreating the
/// lower density edge toward J whenever the branch is exhausted above it.
smooth::TildeTrajectory build_special_curve(const FlowParams& params, double b0,
                                            smooth::Direction dir, double n_lo,
                                            double n_hi) {
  const double J = params.J;
  if (params.alpha == 0.0) {
    double ns = model::n_star(params, b0);
    n_lo = std::max(n_lo, ns + 1e-6 * J);
    return smooth::build_tilde_trajectory(params, b0, dir, n_lo, n_hi);
  }
  for (int i = 0;; ++i) {
    try {
      return smooth::build_tilde_trajectory(params, b0, dir, n_lo, n_hi);
    } catch (const DomainError&) {
      if (i >= 80) throw;
      n_lo = J - 0.8 * (J - n_lo);
    }
  }
}

/// Samples the shock solution into duplicated-row branch samples: the last
/// supersonic row and the first subsonic row share x = x_s.
std::vector<BranchSample> sample_shock_rows(const shock::ShockSolution& s,
                                            const FlowParams& params, int per_side) {
  std::vector<BranchSample> rows;
  SolutionBranch sup = s.supersonic.sample(per_side, params);
  SolutionBranch sub = s.subsonic.sample(per_side, params);
  rows.insert(rows.end(), sup.samples.begin(), sup.samples.end());
  rows.back().regime = Regime::Supersonic;
  rows.insert(rows.end(), sub.samples.begin(), sub.samples.end());
  rows[sup.samples.size()].regime = Regime::Subsonic;
  return rows;
}

json mode_search_json(const stability::LinearizedCoeffs& coeffs,
                      const stability::ModeSearchResult& found) {
  json j;
  j["nu_max"] = coeffs.nu_max();
  j["Ebar_x0"] = coeffs.Ebar(coeffs.x0());
  j["ubar_x0"] = coeffs.ubar(coeffs.x0());
  if (found.mode) {
    j["mode_found"] = true;
    j["nu"] = found.mode->nu;
    j["matching_station"] = found.mode->matching_station;
    j["residual_at_station"] = found.mode->residual_at_station;
  } else {
    j["mode_found"] = false;
    j["no_mode_reason"] = found.no_mode_reason;
  }
  return j;
}

}  // namespace

std::filesystem::path default_out_root() {
  if (const char* root = std::getenv("TRANSONIC_OUT_ROOT")) return root;
  return "out";
}

int run_portrait(const config::RunConfig& rc, const RunOptions& opts) {
  Bundle bundle("portrait", rc, opts);
  const double ts = bundle.tol_scale();
  const FlowParams& p = rc.params;
  const double J = p.J;
  const double b0 = require_constant_b0(rc);

  const double n_min = rc.raw.get_double_or("portrait.n_min", 0.2 * J);
  const double n_max = rc.raw.get_double_or("portrait.n_max", 2.0 * J);
  const double E_min = rc.raw.get_double_or("portrait.E_min", p.alpha - 1.5);
  const double E_max = rc.raw.get_double_or("portrait.E_max", p.alpha + 1.5);
  const int n_count = rc.raw.get_int_or("portrait.n_count", 9);
  const int E_count = rc.raw.get_int_or("portrait.E_count", 9);
  const double guard = shock::kSonicGuardFactor * J;
  const double x_span = rc.raw.get_double_or("portrait.x_span", 40.0 * p.L);

  std::vector<report::PortraitCurve> curves;

  auto field_spec = [&](double n0, double E0, double stop) {
    odeint::IvpSpec spec;
    spec.start = 0.0;
    spec.stop = stop;
    spec.y0 = Vector(2);
    spec.y0[0] = n0;
    spec.y0[1] = E0;
    spec.rtol = 1e-9;
    spec.atol = 1e-11;
    spec.rhs = [&p, b0](double, const Vector& y, Vector& dy) {
      double n = y[0], E = y[1];
      dy[0] = (n * E - p.alpha * p.J) * n * n / (n * n - p.J * p.J);
      dy[1] = n - b0;
    };
    auto ev = [](odeint::EventFn fn, int dir) { return odeint::Event{std::move(fn), dir, true}; };
    spec.events.push_back(ev([n_min](double, const Vector& y) { return y[0] - n_min; }, -1));
    spec.events.push_back(ev([n_max](double, const Vector& y) { return y[0] - n_max; }, +1));
    spec.events.push_back(ev([E_min](double, const Vector& y) { return y[1] - E_min; }, -1));
    spec.events.push_back(ev([E_max](double, const Vector& y) { return y[1] - E_max; }, +1));
    spec.events.push_back(ev([J, guard](double, const Vector& y) { return y[0] - (J - guard); }, +1));
    spec.events.push_back(ev([J, guard](double, const Vector& y) { return y[0] - (J + guard); }, -1));
    spec.events.push_back(ev([J](double, const Vector& y) { return y[0] - 1e-8 * J; }, -1));
    return spec;
  };

  for (int i = 0; i < n_count; ++i) {
    for (int j = 0; j < E_count; ++j) {
      double n0 = n_count == 1 ? n_min : n_min + (n_max - n_min) * i / (n_count - 1);
      double E0 = E_count == 1 ? E_min : E_min + (E_max - E_min) * j / (E_count - 1);
      if (std::abs(n0 - J) <= 2.0 * guard) continue;
      for (double stop : {x_span, -x_span}) {
        try {
          odeint::DenseTrajectory traj = odeint::integrate(field_spec(n0, E0, stop));
          report::PortraitCurve c;
          c.kind = "grid";
          const int m = 200;
          for (int s = 0; s < m; ++s) {
            double x = traj.x_begin() + (traj.x_end() - traj.x_begin()) * s / (m - 1);
            Vector y = traj.sample(x);
            c.n.push_back(y[0]);
            c.E.push_back(y[1]);
          }
          curves.push_back(std::move(c));
        } catch (const odeint::IntegrationError&) {
          // singular set reached with unbounded slope: no polyline
        }
      }
    }
  }

  // The two C1 sonic crossings, one per direction, through (J, alpha).
  report::CheckList checks;
  int crossing_count = 0;
  for (auto dir : {smooth::Direction::SupToSub, smooth::Direction::SubToSup}) {
    const char* kind = dir == smooth::Direction::SupToSub ? "smooth_sup_to_sub"
                                                          : "smooth_sub_to_sup";
    smooth::TildeTrajectory t =
        build_special_curve(p, b0, dir, std::max(n_min, 0.05 * J), n_max);
    report::PortraitCurve c;
    c.kind = kind;
    const int m = 601;
    for (int s = 0; s < m; ++s) {
      double n = t.n_lo() + (t.n_hi() - t.n_lo()) * s / (m - 1);
      c.n.push_back(n);
      c.E.push_back(t.etilde(n) + p.alpha * J / n);
    }
    curves.push_back(std::move(c));
    ++crossing_count;

    double dn = 1e-6 * J;
    auto E_at = [&](double n) { return t.etilde(n) + p.alpha * J / n; };
    double E_cross = 0.5 * (E_at(J - dn) + E_at(J + dn));
    double slope = (E_at(J + dn) - E_at(J - dn)) / (2.0 * dn);
    double slope_expect = t.k() - p.alpha / J;
    checks.pass_if(std::string("portrait.crossing_E.") + kind,
                   std::abs(E_cross - p.alpha) < 1e-4 * ts, E_cross, p.alpha);
    checks.pass_if(std::string("portrait.crossing_slope.") + kind,
                   std::isfinite(slope) && std::abs(slope - slope_expect) < 1e-3 * ts,
                   slope, slope_expect);
  }
  checks.pass_if("portrait.crossing_count", crossing_count == 2,
                 static_cast<double>(crossing_count), 2.0);

  if (bundle.wants("csv")) report::write_portrait_csv(bundle.file("portrait.csv"), curves);
  if (bundle.wants("svg"))
    report::write_portrait_svg(bundle.file("portrait.svg"), curves, J, p.alpha);
  bundle.attach("portrait", json{{"curves", curves.size()},
                                 {"crossing_count", crossing_count},
                                 {"crossing_E", p.alpha}});
  return bundle.finish(checks);
}

int run_smooth(const config::RunConfig& rc, const RunOptions& opts) {
  Bundle bundle("smooth", rc, opts);
  const double ts = bundle.tol_scale();
  const FlowParams& p = rc.params;
  const double b0 = require_constant_b0(rc);
  const smooth::Method method =
      parse_method(rc.raw.get_string_or("smooth.method", "auto"));
  const int samples = rc.raw.get_int_or("smooth.samples", 512);

  smooth::SmoothSolution sol = [&] {
    if (rc.raw.has("smooth.n_l") || rc.raw.has("smooth.n_r"))
      return smooth::assemble_smooth_solution(
          p, b0,
          smooth::BoundaryPair{rc.raw.get_double("smooth.n_l"),
                               rc.raw.get_double("smooth.n_r")},
          method);
    return smooth::assemble_smooth_solution(
        p, b0, smooth::InitialData{rc.raw.get_double("smooth.n0")}, method);
  }();

  report::CheckList checks;
  const auto& cr = sol.crossing();
  checks.pass_if("smooth.crossing_E", std::abs(cr.E_at - p.alpha) < 1e-6 * ts,
                 cr.E_at, p.alpha);
  checks.pass_if("smooth.crossing_E_slope", std::abs(cr.E_slope_at - (p.J - b0)) < 1e-6 * ts,
                 cr.E_slope_at, p.J - b0);

  // Poisson residual with independent differentiation of the sampled field
  const int m = 2048;
  const double h = p.L / (m - 1);
  Vector E(m), nb(m);
  for (int i = 0; i < m; ++i) {
    double x = h * i;
    E[i] = sol.E_at(x);
    nb[i] = sol.n_at(x) - b0;
  }
  Vector Ex = gridfd::deriv1(E, h);
  double poisson = gridfd::sup_norm(Ex - nb);
  checks.pass_if("smooth.poisson_residual", poisson < 1e-6 * ts, poisson, 1e-6 * ts);

  if (sol.achieved_n_r)
    bundle.attach("boundary", json{{"n_r_requested", rc.raw.get_double("smooth.n_r")},
                                   {"n_r_achieved", *sol.achieved_n_r}});
  checks.warn_if("smooth.initial_field_admissible", sol.initial_field_admissible(),
                 sol.E0(), 0.0, "existence hypothesis E0 < min(alpha, alpha J/n0)");

  if (bundle.wants("csv"))
    report::write_branch_csv(bundle.file("solution.csv"), sol.sample_branch(samples).samples);
  bundle.attach("smooth", json{{"x0", cr.x0},
                               {"E_at_x0", cr.E_at},
                               {"E_slope_at_x0", cr.E_slope_at},
                               {"k_used", cr.k_used},
                               {"E0", sol.E0()},
                               {"n_at_L", sol.n_at(p.L)}});
  return bundle.finish(checks);
}

int run_shock(const config::RunConfig& rc, const RunOptions& opts) {
  Bundle bundle("shock", rc, opts);
  const double ts = bundle.tol_scale();
  const FlowParams& p = rc.params;

  const double n_l = rc.raw.get_double("shock.n_l");
  const double E_l = rc.raw.get_double("shock.E_l");
  const double x_lo = rc.raw.get_double_or("shock.x_lo", 0.15 * p.L);
  const double x_hi = rc.raw.get_double_or("shock.x_hi", 0.60 * p.L);
  const double tol_fit = rc.raw.get_double_or("shock.tol_fit", 1e-9 * p.J) * ts;
  const int samples = rc.raw.get_int_or("shock.samples", 256);
  double n_r = rc.raw.get_double_or("shock.n_r", 0.0);
  if (n_r <= 0.0)  // auto target: the image of the bracket midpoint
    n_r = shock::boundary_map_M(p, rc.doping, n_l, E_l, 0.5 * (x_lo + x_hi));

  shock::ShockFitReport fit =
      shock::fit_shock_position(p, rc.doping, n_l, E_l, n_r, x_lo, x_hi, tol_fit);
  const shock::ShockSolution& sol = *fit.solution;
  const JumpRecord& jump = sol.jump;

  report::CheckList checks;
  checks.pass_if("shock.fit_defect", std::abs(fit.n_at_L - n_r) < tol_fit,
                 std::abs(fit.n_at_L - n_r), tol_fit);
  checks.pass_if("shock.rh_flux_defect", jump.rh_residual < 1e-10 * ts,
                 jump.rh_residual, 1e-10 * ts);
  checks.pass_if("shock.rh_field_defect", true, 0.0, 0.0,
                 "field continuous across the jump by construction");
  double entropy_margin = std::min(p.J - jump.n_minus, jump.n_plus - p.J);
  checks.pass_if("shock.entropy_margin", jump.entropy_ok && entropy_margin > 1e-6,
                 entropy_margin, 1e-6);
  checks.pass_if("shock.M_monotone", fit.monotone_ok,
                 fit.monotone_ok ? 1.0 : 0.0, 1.0);
  checks.warn_if("shock.field_positive", fit.field_positive_ok,
                 jump.E_value, 0.0, "monotonicity hypothesis E > 0 at the shock");

  if (bundle.wants("csv")) {
    report::write_branch_csv(bundle.file("solution.csv"),
                             sample_shock_rows(sol, p, samples));
    std::vector<std::vector<double>> rows;
    auto tbl = fit.table;
    std::sort(tbl.begin(), tbl.end(),
              [](const shock::MSample& a, const shock::MSample& b) { return a.x_s < b.x_s; });
    for (const auto& r : tbl) rows.push_back({r.x_s, r.n_at_L, r.E_at_shock});
    report::write_table_csv(bundle.file("m_table.csv"), {"x_s", "n_at_L", "E_at_shock"},
                            rows);
  }
  bundle.attach("shock", json{{"x_s", fit.x_s},
                              {"n_minus", jump.n_minus},
                              {"n_plus", jump.n_plus},
                              {"E_at_shock", jump.E_value},
                              {"n_r_target", n_r},
                              {"n_at_L", fit.n_at_L}});
  return bundle.finish(checks);
}

int run_sweep(const config::RunConfig& rc, const RunOptions& opts) {
  Bundle bundle("sweep", rc, opts);
  const double ts = bundle.tol_scale();
  const FlowParams& p = rc.params;
  const std::string target = rc.raw.get_string_or("sweep.target", "shock");
  std::vector<double> eps_list = rc.raw.has("sweep.eps_list")
                                     ? rc.raw.get_double_list("sweep.eps_list")
                                     : std::vector<double>{1e-2, 1e-3, 1e-4};

  report::CheckList checks;
  if (target == "smooth") {
    const double b0 = require_constant_b0(rc);
    const double n0 = rc.raw.get_double("sweep.n0");
    const double wb = rc.raw.get_double_or("sweep.db", 0.5);
    const double wn = rc.raw.get_double_or("sweep.dn0", 0.5);
    std::vector<std::vector<double>> rows;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (double eps : eps_list) {
      smooth::ProbeReport r = smooth::stability_probe_smooth(
          p, {b0, n0}, {b0 + eps * wb, n0 + eps * wn});
      rows.push_back({eps, r.delta0, r.n_c1_norm, r.E_c2_norm, r.ratio});
      if (eps > 0.0) {
        rmin = std::min(rmin, r.ratio);
        rmax = std::max(rmax, r.ratio);
      }
    }
    double spread = (rmin > 0.0 && std::isfinite(rmin)) ? rmax / rmin : 0.0;
    checks.pass_if("sweep.smooth_ratio_spread", spread < 3.0 * ts, spread, 3.0 * ts);
    if (bundle.wants("csv"))
      report::write_table_csv(bundle.file("sweep.csv"),
                              {"eps", "delta0", "n_c1_norm", "E_c2_norm", "ratio"}, rows);
    bundle.attach("sweep", json{{"target", "smooth"}, {"ratio_spread", spread}});
  } else if (target == "shock") {
    const double n_l = rc.raw.get_double("shock.n_l");
    const double E_l = rc.raw.get_double("shock.E_l");
    const double x_lo = rc.raw.get_double_or("shock.x_lo", 0.15 * p.L);
    const double x_hi = rc.raw.get_double_or("shock.x_hi", 0.60 * p.L);
    double n_r = rc.raw.get_double_or("shock.n_r", 0.0);
    if (n_r <= 0.0)
      n_r = shock::boundary_map_M(p, rc.doping, n_l, E_l, 0.5 * (x_lo + x_hi));
    DopingProfile delta =
        DopingProfile::constant(rc.raw.get_double_or("sweep.delta_b", 1.0));
    shock::ScalingReport rep = shock::stability_probe_shock(
        p, rc.doping, delta, n_l, E_l, n_r, x_lo, x_hi, eps_list);
    std::vector<std::vector<double>> rows;
    for (const auto& r : rep.rows)
      rows.push_back({r.eps, r.x_s, r.displacement, r.ratio, r.sup_c1_diff, r.sup_c1_ratio});
    checks.pass_if("sweep.shock_ratio_spread", rep.ratio_spread < 3.0 * ts,
                   rep.ratio_spread, 3.0 * ts);
    if (bundle.wants("csv"))
      report::write_table_csv(
          bundle.file("sweep.csv"),
          {"eps", "x_s", "displacement", "ratio", "sup_c1_diff", "sup_c1_ratio"}, rows);
    bundle.attach("sweep", json{{"target", "shock"},
                                {"x_s_base", rep.x_s_base},
                                {"ratio_spread", rep.ratio_spread}});
  } else {
    throw ConfigError("sweep.target must be smooth or shock");
  }
  return bundle.finish(checks);
}

int run_modes(const config::RunConfig& rc, const RunOptions& opts) {
  Bundle bundle("modes", rc, opts);
  const double ts = bundle.tol_scale();
  const FlowParams& p = rc.params;

  const double n_l = rc.raw.get_double("modes.n_l");
  const double E_l = rc.raw.get_double("modes.E_l");
  const double x_s = rc.raw.get_double("modes.x_s");
  const double gamma = rc.raw.get_double_or("modes.gamma", 1.0);
  const int stations = rc.raw.get_int_or("modes.stations", 16);

  shock::ShockSolution sol = shock::shock_solution_at(p, rc.doping, n_l, E_l, x_s);
  stability::LinearizedCoeffs coeffs = stability::linearized_coeffs(sol.subsonic, p);

  report::CheckList checks;
  double E0 = coeffs.Ebar(coeffs.x0());
  if (!(E0 < 0.0)) {
    // the growth-rate interval is empty without a negative field at the shock
    checks.warn_if("modes.precondition_Ebar_negative", false, E0, 0.0,
                   "requires Ebar(x0) < 0; growth interval empty");
    bundle.attach("modes", json{{"precondition_failed", true}, {"Ebar_x0", E0}});
    return bundle.finish(checks);
  }
  checks.pass_if("modes.precondition_Ebar_negative", true, E0, 0.0);

  const double nu_max = coeffs.nu_max();
  double s0 = stability::shoot_initial_slope(coeffs, 0.0, gamma);
  double s1 = stability::shoot_initial_slope(coeffs, nu_max, gamma);
  checks.pass_if("modes.sign_Ux_x0_at_nu0", s0 < 0.0, s0, 0.0);
  checks.pass_if("modes.sign_Ux_x0_at_numax", s1 > 0.0, s1, 0.0);

  stability::ModeSearchResult found =
      stability::find_growth_rate(coeffs, gamma, 1e-10, stations);
  bundle.attach("modes", mode_search_json(coeffs, found));
  if (!found.mode) {
    checks.warn_if("modes.mode_found", false, 0.0, 0.0, found.no_mode_reason);
    return bundle.finish(checks);
  }

  const stability::InstabilityMode& mode = *found.mode;
  stability::ShotResult shot = stability::shoot_mode(coeffs, mode.nu, gamma);
  stability::ModeResiduals res = stability::verify_mode(coeffs, mode, shot);

  checks.pass_if("modes.nu_interior", mode.nu > 0.0 && mode.nu < nu_max, mode.nu, nu_max);
  checks.pass_if("modes.terminal_defect", res.terminal_defect < 1e-8 * ts,
                 res.terminal_defect, 1e-8 * ts);
  checks.pass_if("modes.interior_residual", res.interior_sup < 1e-6 * ts,
                 res.interior_sup, 1e-6 * ts);
  checks.pass_if("modes.boundary_defect", res.boundary_defect_x0 < 1e-8 * ts,
                 res.boundary_defect_x0, 1e-8 * ts);

  if (bundle.wants("csv")) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < mode.xs.size(); ++i)
      rows.push_back({mode.xs[i], mode.U[i]});
    report::write_table_csv(bundle.file("mode.csv"), {"x", "U"}, rows);
  }
  return bundle.finish(checks);
}

int run_validate(const config::RunConfig& rc, const RunOptions& opts) {
  Bundle bundle("validate", rc, opts);
  const double ts = bundle.tol_scale();
  const FlowParams& p = rc.params;
  const double J = p.J;
  const double b0 = rc.doping.is_constant() ? rc.doping.constant_value() : rc.doping(0.0);
  report::CheckList checks;

  // -- model invariants ------------------------------------------------------
  for (double f : {0.2, 0.5, 0.8}) {
    double n = f * J;
    double ns = model::shock_map_S(n, p);
    double flux_defect =
        std::abs(model::momentum_flux(n, p) - model::momentum_flux(ns, p));
    checks.pass_if("model.flux_invariance_n" + label(f * J), flux_defect < 1e-12,
                   flux_defect, 1e-12);
    double round_trip = std::abs(J * J / ns - n);
    checks.pass_if("model.S_round_trip_n" + label(f * J), round_trip < 1e-12,
                   round_trip, 1e-12);
    checks.pass_if("model.S_entropy_n" + label(f * J), ns > J, ns, J);
  }

  FlowParams p0(J, 0.0, p.L);
  checks.pass_if("model.g_at_J", std::abs(model::g_of_n(J, p0, b0)) < 1e-12,
                 std::abs(model::g_of_n(J, p0, b0)), 1e-12);
  double ns_alpha0 = model::n_star(p0, b0);
  for (double f : {0.8, 1.2, 1.5}) {
    double n = f * J;
    if (n <= ns_alpha0) continue;
    double fac = std::abs(model::trajectory_field(n, p0, b0) -
                          (n - J) * model::W_of(n, b0, p0));
    checks.pass_if("model.factorization_n" + label(f * J), fac < 1e-10, fac, 1e-10);
  }
  double kp = model::sonic_slope_k(p, b0, model::SonicBranch::Plus);
  double km = model::sonic_slope_k(p, b0, model::SonicBranch::Minus);
  double vieta_sum = std::abs(kp + km - p.alpha / J);
  double vieta_prod = std::abs(kp * km + 2.0 * (J - b0) / (J * J));
  checks.pass_if("model.sonic_slopes_vieta_sum", vieta_sum < 1e-12, vieta_sum, 1e-12);
  checks.pass_if("model.sonic_slopes_vieta_product", vieta_prod < 1e-12, vieta_prod, 1e-12);

  // Rankine-Hugoniot defect arithmetic (with the optional corruption knob)
  {
    bool corrupt = rc.raw.get_bool_or("validate.corrupt_jump", false);
    double n_minus = 0.5 * J;
    double n_plus = model::shock_map_S(n_minus, p) + (corrupt ? 0.1 : 0.0);
    auto [flux_defect, field_defect] =
        model::rh_residuals({0.0, n_minus, 1.0}, {0.0, n_plus, 1.0}, p);
    checks.pass_if("model.rh_flux_defect", flux_defect < 1e-10, flux_defect, 1e-10,
                   corrupt ? "deliberately corrupted jump" : "");
    checks.pass_if("model.rh_field_defect", field_defect == 0.0, field_defect, 0.0);
  }

  // -- odeint invariants -----------------------------------------------------
  {
    odeint::IvpSpec spec;
    spec.start = 0.0;
    spec.stop = 1.0;
    spec.y0 = Vector::Ones(1);
    spec.rhs = [](double, const Vector& y, Vector& dy) { dy[0] = y[0]; };
    double err = std::abs(odeint::integrate(spec).y_end()[0] - std::exp(1.0));
    checks.pass_if("odeint.exponential_error", err < 1e-9, err, 1e-9);

    spec.events.push_back({[](double, const Vector& y) { return y[0] - 2.0; }, +1, true});
    odeint::DenseTrajectory traj = odeint::integrate(spec);
    double ev_err = std::abs(traj.x_end() - std::log(2.0));
    checks.pass_if("odeint.event_at_log2", ev_err < 1e-9, ev_err, 1e-9);
  }

  // -- gridfd stencil accuracy ----------------------------------------------
  {
    const int m = 101;
    const double h = 1.0 / (m - 1);
    Vector f(m), d1e(m), d2e(m);
    for (int i = 0; i < m; ++i) {
      double x = h * i;
      f[i] = std::sin(2.0 * x);
      d1e[i] = 2.0 * std::cos(2.0 * x);
      d2e[i] = -4.0 * std::sin(2.0 * x);
    }
    double e1 = gridfd::sup_norm(gridfd::deriv1(f, h) - d1e);
    double e2 = gridfd::sup_norm(gridfd::deriv2(f, h) - d2e);
    checks.pass_if("gridfd.deriv1_error", e1 < 1e-6, e1, 1e-6);
    checks.pass_if("gridfd.deriv2_error", e2 < 1e-4, e2, 1e-4);
  }

  // -- smooth construction ---------------------------------------------------
  {
    double n0 = rc.raw.get_double_or("validate.n0", 0.8 * J);
    smooth::SmoothSolution sol =
        smooth::assemble_smooth_solution(p, b0, smooth::InitialData{n0});
    const auto& cr = sol.crossing();
    checks.pass_if("smooth.crossing_E", std::abs(cr.E_at - p.alpha) < 1e-6 * ts,
                   cr.E_at, p.alpha);
    checks.pass_if("smooth.crossing_E_slope",
                   std::abs(cr.E_slope_at - (J - b0)) < 1e-6 * ts, cr.E_slope_at, J - b0);

    const int m = 1024;
    const double h = p.L / (m - 1);
    Vector E(m), nb(m);
    for (int i = 0; i < m; ++i) {
      double x = h * i;
      E[i] = sol.E_at(x);
      nb[i] = sol.n_at(x) - b0;
    }
    double poisson = gridfd::sup_norm(gridfd::deriv1(E, h) - nb);
    checks.pass_if("smooth.poisson_residual", poisson < 1e-6 * ts, poisson, 1e-6 * ts);

    // alpha = 0 closed-form invariant E^2 = g(n) and pipeline cross-check
    smooth::SmoothSolution s0 =
        smooth::assemble_smooth_solution(p0, b0, smooth::InitialData{n0},
                                         smooth::Method::ClosedForm);
    double inv = 0.0;
    for (int i = 0; i < m; ++i) {
      double x = h * i;
      double n = s0.n_at(x), Ev = s0.E_at(x);
      inv = std::max(inv, std::abs(Ev * Ev - model::g_of_n(n, p0, b0)));
    }
    checks.pass_if("smooth.alpha0_invariant", inv < 1e-7 * ts, inv, 1e-7 * ts);

    double n_lo_cmp = ns_alpha0 + 0.05;
    smooth::TildeTrajectory t_cf = smooth::build_tilde_trajectory(
        p0, b0, smooth::Direction::SupToSub, n_lo_cmp, 2.0 * J, smooth::Method::ClosedForm);
    smooth::TildeTrajectory t_ode = smooth::build_tilde_trajectory(
        p0, b0, smooth::Direction::SupToSub, n_lo_cmp, 2.0 * J, smooth::Method::Ode);
    double cross = 0.0;
    for (double n : linspace(n_lo_cmp, 2.0 * J, 513))
      cross = std::max(cross, std::abs(t_cf.etilde(n) - t_ode.etilde(n)));
    checks.pass_if("smooth.pipeline_cross_validation", cross < 1e-7 * ts, cross, 1e-7 * ts);
  }

  // -- shock construction ----------------------------------------------------
  {
    double n_l = rc.raw.get_double_or("shock.n_l", 0.7 * J);
    double E_l = rc.raw.get_double_or("shock.E_l", 2.0);
    double x_lo = rc.raw.get_double_or("shock.x_lo", 0.15 * p.L);
    double x_hi = rc.raw.get_double_or("shock.x_hi", 0.60 * p.L);
    double n_r = rc.raw.get_double_or("shock.n_r", 0.0);
    if (n_r <= 0.0)
      n_r = shock::boundary_map_M(p, rc.doping, n_l, E_l, 0.5 * (x_lo + x_hi));

    // monotone audit: 10 shock positions, strictly decreasing M under E > 0
    double prev = std::numeric_limits<double>::infinity();
    int violations = 0;
    bool all_E_positive = true;
    for (double x_s : linspace(x_lo, x_hi, 10)) {
      shock::ShockSolution s = shock::shock_solution_at(p, rc.doping, n_l, E_l, x_s);
      if (!(s.n_at_L < prev)) ++violations;
      if (!(s.jump.E_value > 0.0)) all_E_positive = false;
      prev = s.n_at_L;
    }
    checks.pass_if("shock.M_strictly_decreasing", violations == 0,
                   static_cast<double>(violations), 0.0);
    checks.warn_if("shock.all_fields_positive", all_E_positive,
                   all_E_positive ? 1.0 : 0.0, 1.0, "monotonicity hypothesis E > 0");

    shock::ShockFitReport fit =
        shock::fit_shock_position(p, rc.doping, n_l, E_l, n_r, x_lo, x_hi, 1e-9 * J * ts);
    checks.pass_if("shock.fit_defect", std::abs(fit.n_at_L - n_r) < 1e-9 * J * ts,
                   std::abs(fit.n_at_L - n_r), 1e-9 * J * ts);
    checks.pass_if("shock.rh_flux_defect", fit.solution->jump.rh_residual < 1e-10 * ts,
                   fit.solution->jump.rh_residual, 1e-10 * ts);
    double margin = std::min(J - fit.solution->jump.n_minus,
                             fit.solution->jump.n_plus - J);
    checks.pass_if("shock.entropy_margin", fit.solution->jump.entropy_ok && margin > 1e-6,
                   margin, 1e-6);
  }

  // -- stability shooting (needs a negative-field shock state, which only
  //    survives on a short subsonic interval; default sub-domain 0.2 L) -----
  try {
    double L_stab = rc.raw.get_double_or("modes.L", 0.2 * p.L);
    FlowParams p_stab(J, p.alpha, L_stab);
    double n_l = rc.raw.get_double_or("modes.n_l", 0.6 * J);
    double E_l = rc.raw.get_double_or("modes.E_l", -0.2);
    double x_s = rc.raw.get_double_or("modes.x_s", 0.25 * L_stab);
    shock::ShockSolution sol = shock::shock_solution_at(p_stab, rc.doping, n_l, E_l, x_s);
    stability::LinearizedCoeffs coeffs = stability::linearized_coeffs(sol.subsonic, p_stab);
    double E0 = coeffs.Ebar(coeffs.x0());
    if (E0 < 0.0) {
      double s0 = stability::shoot_initial_slope(coeffs, 0.0, 1.0);
      double s1 = stability::shoot_initial_slope(coeffs, coeffs.nu_max(), 1.0);
      checks.pass_if("stability.sign_Ux_x0_at_nu0", s0 < 0.0, s0, 0.0);
      checks.pass_if("stability.sign_Ux_x0_at_numax", s1 > 0.0, s1, 0.0);
      stability::ModeSearchResult found = stability::find_growth_rate(coeffs, 1.0);
      if (found.mode) {
        stability::ShotResult shot = stability::shoot_mode(coeffs, found.mode->nu, 1.0);
        stability::ModeResiduals res = stability::verify_mode(coeffs, *found.mode, shot);
        checks.pass_if("stability.nu_interior",
                       found.mode->nu > 0.0 && found.mode->nu < coeffs.nu_max(),
                       found.mode->nu, coeffs.nu_max());
        checks.pass_if("stability.terminal_defect", res.terminal_defect < 1e-8 * ts,
                       res.terminal_defect, 1e-8 * ts);
        checks.pass_if("stability.interior_residual", res.interior_sup < 1e-6 * ts,
                       res.interior_sup, 1e-6 * ts);
      } else {
        checks.warn_if("stability.mode_found", false, 0.0, 0.0, found.no_mode_reason);
      }
    } else {
      checks.warn_if("stability.precondition_Ebar_negative", false, E0, 0.0,
                     "growth interval empty for this configuration");
    }
  } catch (const SolverError& e) {
    checks.warn_if("stability.segment", false, 0.0, 0.0,
                   std::string("skipped: ") + e.what());
  }

  return bundle.finish(checks);
}

int run_experiment(const std::string& kind, const std::string& config_path,
                   const RunOptions& opts) {
  try {
    config::RunConfig rc =
        config::load_run_config(config::KeyValueConfig::parse_file(config_path));
    if (kind == "portrait") return run_portrait(rc, opts);
    if (kind == "smooth") return run_smooth(rc, opts);
    if (kind == "shock") return run_shock(rc, opts);
    if (kind == "sweep") return run_sweep(rc, opts);
    if (kind == "modes") return run_modes(rc, opts);
    if (kind == "validate") return run_validate(rc, opts);
    std::cerr << "error: unknown experiment '" << kind << "'\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error [" << e.kind() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace transonic::cli
