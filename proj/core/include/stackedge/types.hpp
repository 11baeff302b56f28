#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace stackedge {

// Smallest admissible unit price. The Stage-II equilibrium expressions divide
// by the price, so exact zeros are rejected at the boundary of the strategy
// space.
inline constexpr double kMinPrice = 1e-9;

// One miner: `block_size` is the number of transactions in the block it
// mines. Modeled as a positive real; the utility model is continuous in it.
struct MinerProfile {
  int id = 0;
  double block_size = 1.0;
};

enum class PricingScheme { kUniform, kDiscriminatory };

std::string to_string(PricingScheme scheme);
bool parse_scheme(const std::string& text, PricingScheme& out);

// Economy-wide constants. Defaults follow the canonical simulation setup:
// R = 1e4 tokens, r = 20 tokens per transaction, z = 5e-3 time units per
// transaction, c = 1e-3 per demand-unit per time unit, demand box
// [1e-2, 100], price cap 100. The block arrival rate and the mining time
// are not fixed by that setup; we default to lambda = 1/600 (the familiar
// per-second block rate) and T = 1/lambda. Both are ordinary fields and can
// be overridden.
struct MarketParams {
  double fixed_reward = 1e4;             // R
  double variable_reward_factor = 20.0;  // r
  double poisson_rate = 1.0 / 600.0;     // lambda
  double delay_factor = 5e-3;            // z
  double electricity_cost = 1e-3;        // c
  double mining_time = 600.0;            // T
  double demand_min = 1e-2;
  double demand_max = 100.0;
  double price_cap = 100.0;

  static MarketParams defaults() { return MarketParams{}; }
};

// Per-miner service demands, the Stage-II decision variable.
struct DemandProfile {
  std::vector<double> demands;

  std::size_t size() const { return demands.size(); }
  double operator[](std::size_t i) const { return demands[i]; }
  double total() const;
};

// Per-miner unit prices, the Stage-I decision variable. A uniform schedule
// stores the common price replicated per miner.
struct PriceSchedule {
  std::vector<double> prices;
  PricingScheme scheme = PricingScheme::kUniform;

  std::size_t size() const { return prices.size(); }
  double operator[](std::size_t i) const { return prices[i]; }

  static PriceSchedule uniform(std::size_t n, double price);
  static PriceSchedule discriminatory(std::vector<double> prices);
};

// Stage-II solve outcome plus diagnostics.
struct EquilibriumReport {
  DemandProfile demands;
  std::vector<double> utilities;
  double esp_profit = 0.0;
  int iterations = 0;
  bool converged = false;
  bool uniqueness_condition_holds = false;
  bool interior = false;  // no demand at a box bound
};

// Validation helpers. Each throws std::invalid_argument with a message that
// names the offending field.
void validate_market(const MarketParams& params);
void validate_profiles(const std::vector<MinerProfile>& profiles);
void validate_demands(const DemandProfile& x, const MarketParams& params);
void validate_prices(const PriceSchedule& p, const MarketParams& params,
                     double min_price = kMinPrice);

}  // namespace stackedge
