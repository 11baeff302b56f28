#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "stackedge_cli/commands.hpp"
#include "stackedge_cli/config.hpp"

using stackedge::PricingScheme;
using stackedge::cli::CommonFlags;
using stackedge::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{
      "stackedge: two-stage pricing of edge-computing service for mobile "
      "proof-of-work miners"};
  app.require_subcommand(1);

  CommonFlags flags;
  long long seed_flag = -1;
  int replications_flag = -1;
  app.add_option("--config", flags.config_path,
                 "Path to a key = value configuration file");
  auto* seed_opt = app.add_option("--seed", seed_flag, "Scenario seed");
  auto* reps_opt = app.add_option("--replications", replications_flag,
                                  "Replications per scenario");
  app.add_option("--out", flags.out_path, "Output path");
  app.add_flag("--verbose", flags.verbose, "Verbose solver progress");

  auto* solve = app.add_subcommand(
      "solve-mdg", "Solve the Stage-II demand game at fixed prices");

  std::string scheme_name;
  auto* optimize =
      app.add_subcommand("optimize", "Solve Stage I for a pricing scheme");
  optimize
      ->add_option("--scheme", scheme_name,
                   "Pricing scheme: uniform or discriminatory")
      ->required();

  std::string axis_flag, values_flag, curve_flag;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep_cmd->add_option("--axis", axis_flag,
                        "Sweep axis: n_miners, variable_reward_factor, "
                        "fixed_reward, block_mean, block_var");
  sweep_cmd->add_option("--values", values_flag,
                        "Comma-separated axis values");
  sweep_cmd->add_option("--curve", curve_flag,
                        "Optional <axis>=<v1,v2,...>: one output file per "
                        "curve value");

  auto* verify = app.add_subcommand(
      "verify", "Run the invariant battery on the configured scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::cerr << "error: " << e.what() << '\n';
    std::cerr << app.help() << '\n';
    return stackedge::cli::kExitInvalid;
  }

  if (seed_opt->count() > 0) flags.seed = seed_flag;
  if (reps_opt->count() > 0) flags.replications = replications_flag;

  RunConfig config;
  const int load_code = stackedge::cli::load_run_config(flags, config);
  if (load_code != stackedge::cli::kExitOk) return load_code;

  if (solve->parsed()) {
    return stackedge::cli::cmd_solve_mdg(config, flags);
  }
  if (optimize->parsed()) {
    PricingScheme scheme;
    if (!stackedge::parse_scheme(scheme_name, scheme)) {
      std::cerr << "error: --scheme: expected 'uniform' or 'discriminatory', "
                   "got '"
                << scheme_name << "'\n";
      return stackedge::cli::kExitInvalid;
    }
    return stackedge::cli::cmd_optimize(config, flags, scheme);
  }
  if (sweep_cmd->parsed()) {
    return stackedge::cli::cmd_sweep(config, flags, axis_flag, values_flag,
                                     curve_flag);
  }
  if (verify->parsed()) {
    return stackedge::cli::cmd_verify(config, flags);
  }
  return stackedge::cli::kExitInvalid;
}
