#include "stackedge/economics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "stackedge/rng.hpp"

namespace stackedge {

namespace {

void check_index(std::size_t i, std::size_t n) {
  if (i >= n) {
    throw std::out_of_range("miner index " + std::to_string(i) +
                            " out of range for " + std::to_string(n) +
                            " miners");
  }
}

void check_same_length(std::size_t nx, std::size_t np) {
  if (nx != np) {
    throw std::invalid_argument(
        "demands and prices must have the same length (" + std::to_string(nx) +
        " vs " + std::to_string(np) + ")");
  }
}

}  // namespace

double relative_power(const DemandProfile& x, std::size_t i) {
  check_index(i, x.size());
  const double total = x.total();
  if (!(total > 0.0)) {
    throw std::invalid_argument("total demand must be strictly positive");
  }
  return x[i] / total;
}

double orphan_probability(double block_size, const MarketParams& params) {
  if (block_size < 0.0) {
    throw std::invalid_argument("block size must be nonnegative");
  }
  return -std::expm1(-params.poisson_rate * params.delay_factor * block_size);
}

double win_probability(const DemandProfile& x, std::size_t i,
                       const std::vector<MinerProfile>& profiles,
                       const MarketParams& params) {
  check_index(i, profiles.size());
  check_same_length(x.size(), profiles.size());
  return relative_power(x, i) *
         std::exp(-params.poisson_rate * params.delay_factor *
                  profiles[i].block_size);
}

double reward_coefficient(double block_size, const MarketParams& params) {
  if (block_size < 0.0) {
    throw std::invalid_argument("block size must be nonnegative");
  }
  return (params.fixed_reward + params.variable_reward_factor * block_size) *
         std::exp(-params.poisson_rate * params.delay_factor * block_size);
}

std::vector<double> reward_coefficients(
    const std::vector<MinerProfile>& profiles, const MarketParams& params) {
  std::vector<double> a(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    a[i] = reward_coefficient(profiles[i].block_size, params);
  }
  return a;
}

double miner_utility(const DemandProfile& x, const PriceSchedule& p,
                     std::size_t i, const std::vector<MinerProfile>& profiles,
                     const MarketParams& params) {
  check_index(i, profiles.size());
  check_same_length(x.size(), p.size());
  check_same_length(x.size(), profiles.size());
  return reward_coefficient(profiles[i].block_size, params) *
             relative_power(x, i) -
         p[i] * x[i];
}

double esp_profit(const DemandProfile& x, const PriceSchedule& p,
                  const MarketParams& params) {
  check_same_length(x.size(), p.size());
  double revenue = 0.0;
  double cost = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    revenue += p[i] * x[i];
    cost += params.electricity_cost * params.mining_time * x[i];
  }
  return revenue - cost;
}

std::vector<double> simulate_mining_race(
    const DemandProfile& x, const std::vector<MinerProfile>& profiles,
    const MarketParams& params, std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  check_same_length(x.size(), profiles.size());
  const std::size_t n = x.size();

  // Cumulative relative power for inverse-CDF winner draws.
  std::vector<double> cumulative(n);
  const double total = x.total();
  if (!(total > 0.0)) {
    throw std::invalid_argument("total demand must be strictly positive");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i] / total;
    cumulative[i] = acc;
  }
  cumulative[n - 1] = 1.0;

  std::vector<double> survival(n);
  for (std::size_t i = 0; i < n; ++i) {
    survival[i] = 1.0 - orphan_probability(profiles[i].block_size, params);
  }

  std::vector<std::int64_t> wins(n, 0);
  Rng rng(seed);
  for (std::int64_t t = 0; t < trials; ++t) {
    const double u = rng.uniform01();
    std::size_t winner =
        std::lower_bound(cumulative.begin(), cumulative.end(), u) -
        cumulative.begin();
    if (winner >= n) winner = n - 1;
    if (rng.uniform01() < survival[winner]) {
      ++wins[winner];
    }
  }

  std::vector<double> freq(n);
  for (std::size_t i = 0; i < n; ++i) {
    freq[i] = static_cast<double>(wins[i]) / static_cast<double>(trials);
  }
  return freq;
}

}  // namespace stackedge
