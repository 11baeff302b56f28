#include "stackedge/types.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace stackedge {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::string to_string(PricingScheme scheme) {
  return scheme == PricingScheme::kUniform ? "uniform" : "discriminatory";
}

bool parse_scheme(const std::string& text, PricingScheme& out) {
  if (text == "uniform") {
    out = PricingScheme::kUniform;
    return true;
  }
  if (text == "discriminatory") {
    out = PricingScheme::kDiscriminatory;
    return true;
  }
  return false;
}

double DemandProfile::total() const {
  return std::accumulate(demands.begin(), demands.end(), 0.0);
}

PriceSchedule PriceSchedule::uniform(std::size_t n, double price) {
  PriceSchedule p;
  p.prices.assign(n, price);
  p.scheme = PricingScheme::kUniform;
  return p;
}

PriceSchedule PriceSchedule::discriminatory(std::vector<double> prices) {
  PriceSchedule p;
  p.prices = std::move(prices);
  p.scheme = PricingScheme::kDiscriminatory;
  return p;
}

void validate_market(const MarketParams& m) {
  require(finite(m.fixed_reward) && m.fixed_reward > 0.0,
          "market.fixed_reward: must be a positive finite real");
  require(finite(m.variable_reward_factor) && m.variable_reward_factor >= 0.0,
          "market.variable_reward_factor: must be a nonnegative finite real");
  require(finite(m.poisson_rate) && m.poisson_rate > 0.0,
          "market.poisson_rate: must be a positive finite real");
  require(finite(m.delay_factor) && m.delay_factor > 0.0,
          "market.delay_factor: must be a positive finite real");
  require(finite(m.electricity_cost) && m.electricity_cost >= 0.0,
          "market.electricity_cost: must be a nonnegative finite real");
  require(finite(m.mining_time) && m.mining_time > 0.0,
          "market.mining_time: must be a positive finite real");
  require(finite(m.demand_min) && m.demand_min > 0.0,
          "market.demand_min: must be a positive finite real");
  require(finite(m.demand_max) && m.demand_max > m.demand_min,
          "market.demand_max: must be finite and exceed market.demand_min");
  require(finite(m.price_cap) && m.price_cap > 0.0,
          "market.price_cap: must be a positive finite real");
}

void validate_profiles(const std::vector<MinerProfile>& profiles) {
  require(!profiles.empty(), "miners: at least one miner is required");
  std::set<int> ids;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& m = profiles[i];
    require(finite(m.block_size) && m.block_size >= 1.0,
            "miners.block_sizes[" + std::to_string(i) +
                "]: block size must be >= 1");
    require(ids.insert(m.id).second,
            "miners.id[" + std::to_string(i) + "]: duplicate miner id " +
                std::to_string(m.id));
  }
}

void validate_demands(const DemandProfile& x, const MarketParams& params) {
  require(!x.demands.empty(), "demands: must not be empty");
  double total = 0.0;
  for (std::size_t i = 0; i < x.demands.size(); ++i) {
    const double v = x.demands[i];
    require(finite(v) && v >= params.demand_min && v <= params.demand_max,
            "demands[" + std::to_string(i) +
                "]: outside [demand_min, demand_max]");
    total += v;
  }
  require(total > 0.0, "demands: total demand must be strictly positive");
}

void validate_prices(const PriceSchedule& p, const MarketParams& params,
                     double min_price) {
  require(!p.prices.empty(), "prices.values: must not be empty");
  for (std::size_t i = 0; i < p.prices.size(); ++i) {
    const double v = p.prices[i];
    require(finite(v) && v > 0.0, "prices.values[" + std::to_string(i) +
                                      "]: price must be > 0");
    require(v >= min_price, "prices.values[" + std::to_string(i) +
                                "]: price below minimum admissible " +
                                std::to_string(min_price));
    require(v <= params.price_cap, "prices.values[" + std::to_string(i) +
                                       "]: price above market.price_cap");
  }
  if (p.scheme == PricingScheme::kUniform) {
    for (std::size_t i = 1; i < p.prices.size(); ++i) {
      require(p.prices[i] == p.prices[0],
              "prices.values: uniform scheme requires all entries equal");
    }
  }
}

}  // namespace stackedge
