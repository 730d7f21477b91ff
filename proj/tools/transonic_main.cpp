#include <string>
#include <vector>

#include "CLI11.hpp"
#include "transonic/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"transonic: steady transonic solver suite for the 1-D "
               "Euler-Poisson hydrodynamic semiconductor model"};
  app.require_subcommand(1);

  struct Common {
    std::string config;
    std::string out;
    std::vector<std::string> formats;
    double tol_scale = 0.0;
  };

  std::vector<std::pair<std::string, Common>> cmds;
  for (const char* name : {"portrait", "smooth", "shock", "sweep", "modes", "validate"}) {
    cmds.emplace_back(name, Common{});
  }
  for (auto& [name, common] : cmds) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", common.config, "experiment config file")->required();
    sub->add_option("--out", common.out, "output directory (default: $TRANSONIC_OUT_ROOT/" +
                                             name + ")");
    sub->add_option("--format", common.formats, "output formats (csv, json, svg)")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    sub->add_option("--tol-scale", common.tol_scale, "tolerance scale factor")
        ->check(CLI::PositiveNumber);
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [name, common] : cmds) {
    if (!app.get_subcommand(name)->parsed()) continue;
    transonic::cli::RunOptions opts;
    opts.out_dir = common.out;
    opts.format_override = common.formats;
    opts.tol_scale_override = common.tol_scale;
    return transonic::cli::run_experiment(name, common.config, opts);
  }
  return 1;
}
