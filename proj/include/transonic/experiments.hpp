#ifndef TRANSONIC_EXPERIMENTS_HPP
#define TRANSONIC_EXPERIMENTS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "transonic/config.hpp"
#include "transonic/report.hpp"

// Experiment orchestration: each runner consumes a validated RunConfig,
// solves, writes a deterministic ReportBundle (manifest.json, checks.json,
// per-experiment data files) into its output directory, and returns the
// process exit code:
//   0 all checks pass, 1 config error, 2 solver error, 3 validation FAIL.

namespace transonic::cli {

struct RunOptions {
  std::filesystem::path out_dir;              // empty = default root/<experiment>
  std::vector<std::string> format_override;   // empty = formats from config
  double tol_scale_override = 0.0;            // 0 = take from config
};

/// Default output root: $TRANSONIC_OUT_ROOT if set, else ./out.
std::filesystem::path default_out_root();

int run_portrait(const config::RunConfig& rc, const RunOptions& opts);
int run_smooth(const config::RunConfig& rc, const RunOptions& opts);
int run_shock(const config::RunConfig& rc, const RunOptions& opts);
int run_sweep(const config::RunConfig& rc, const RunOptions& opts);
int run_modes(const config::RunConfig& rc, const RunOptions& opts);
int run_validate(const config::RunConfig& rc, const RunOptions& opts);

/// Dispatch by subcommand name; maps thrown errors onto exit codes.
int run_experiment(const std::string& kind, const std::string& config_path,
                   const RunOptions& opts);

}  // namespace transonic::cli

#endif  // TRANSONIC_EXPERIMENTS_HPP
