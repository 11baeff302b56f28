#pragma once

#include <optional>
#include <string>

#include "stackedge_cli/config.hpp"

namespace stackedge::cli {

// Process exit codes. 0 = success, 1 = invalid input, 2 = solver did not
// converge, 3 = a verification check failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitVerifyFailed = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<long long> seed;
  std::optional<int> replications;
  std::string out_path;
  bool verbose = false;
};

// Loads the config file (when given) and applies flag overrides. Returns
// kExitOk or kExitInvalid after printing a diagnostic.
int load_run_config(const CommonFlags& flags, RunConfig& config);

int cmd_solve_mdg(const RunConfig& config, const CommonFlags& flags);
int cmd_optimize(const RunConfig& config, const CommonFlags& flags,
                 PricingScheme scheme);
int cmd_sweep(const RunConfig& config, const CommonFlags& flags,
              const std::string& axis_flag, const std::string& values_flag,
              const std::string& curve_flag);
int cmd_verify(const RunConfig& config, const CommonFlags& flags);

}  // namespace stackedge::cli
