#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stackedge/pricing_discriminatory.hpp"
#include "stackedge/pricing_uniform.hpp"
#include "stackedge/rng.hpp"
#include "stackedge/types.hpp"

namespace stackedge {

// One simulated scenario: block sizes are drawn from Normal(block_mean,
// block_var), truncated below at 1 by redrawing.
struct ScenarioSpec {
  int n_miners = 100;
  double block_mean = 200.0;
  double block_var = 5.0;
  MarketParams market;
  std::uint64_t seed = 1;
  int replications = 20;
};

std::vector<MinerProfile> sample_profiles(int n_miners, double block_mean,
                                          double block_var, Rng& rng);

// Uses the spec's own seed; two calls with equal specs produce identical
// profiles.
std::vector<MinerProfile> sample_profiles(const ScenarioSpec& spec);

struct ReplicationRecord {
  bool failed = false;
  std::string error;
  double mean_price = 0.0;
  double profit = 0.0;
  double total_demand = 0.0;
  bool stage2_converged = false;
  bool stage1_converged = false;
  std::vector<double> prices;
  std::vector<double> demands;
};

struct ScenarioResult {
  std::vector<ReplicationRecord> records;
  double mean_profit = 0.0;
  double sd_profit = 0.0;
  double mean_total_demand = 0.0;
  double sd_total_demand = 0.0;
  double mean_price = 0.0;
  int completed = 0;  // replications that did not fail
};

// Runs `spec.replications` independent draws: sample profiles, solve Stage I
// for the scheme, record the induced Stage-II equilibrium. The replication
// seeds are spec.seed + replication index, so axis sweeps that share a base
// seed reuse the same draws (common random numbers). Solver failures are
// recorded per replication, not thrown.
ScenarioResult run_scenario(const ScenarioSpec& spec, PricingScheme scheme,
                            const SolverConfig& stage2 = {},
                            const AscentOptions& ascent = {});

enum class SweepAxis {
  kNMiners,
  kVariableRewardFactor,
  kFixedReward,
  kBlockMean,
  kBlockVar,
};

std::string to_string(SweepAxis axis);
bool parse_axis(const std::string& text, SweepAxis& out);

// One CSV row. The demand/profit columns of a finished sweep are normalized
// by the maximum mean across the rows written together (the mean_price
// column is left in price units).
struct SweepResult {
  SweepAxis axis = SweepAxis::kNMiners;
  PricingScheme scheme = PricingScheme::kUniform;
  double value = 0.0;
  double mean_total_demand = 0.0;
  double sd_total_demand = 0.0;
  double mean_profit = 0.0;
  double sd_profit = 0.0;
  double mean_price = 0.0;
  int replications = 0;
};

// Runs run_scenario at every axis value for one scheme. Axis points and
// replications are solved in parallel subject to the STACKEDGE_THREADS
// budget; results are aggregated in deterministic order, so output is
// byte-identical regardless of the thread count.
std::vector<SweepResult> sweep(const ScenarioSpec& base, PricingScheme scheme,
                               SweepAxis axis,
                               const std::vector<double>& values,
                               const SolverConfig& stage2 = {},
                               const AscentOptions& ascent = {});

ScenarioSpec apply_axis(const ScenarioSpec& base, SweepAxis axis,
                        double value);

// Divides the demand and profit columns (means and sds) by the maximum mean
// across `rows`, in place.
void normalize_sweep(std::vector<SweepResult>& rows);

// Header: axis,scheme,value,mean_total_demand,sd_total_demand,mean_profit,
// sd_profit,mean_price,replications. Floating-point fields carry 12
// significant digits. Rows are written as given; normalize_sweep first if
// normalized columns are wanted.
void write_sweep_csv(const std::vector<SweepResult>& rows, std::ostream& out);
std::string sweep_csv(std::vector<SweepResult> rows);  // normalizes, then formats

// Thread budget for parallel sections: STACKEDGE_THREADS, where unset or 0
// means hardware concurrency.
int thread_budget();

}  // namespace stackedge
