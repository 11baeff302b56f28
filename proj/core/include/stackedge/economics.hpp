#pragma once

#include <cstdint>
#include <vector>

#include "stackedge/types.hpp"

namespace stackedge {

// Closed-form economics of the mining market. All functions are pure and
// total on their documented preconditions; invalid inputs throw
// std::invalid_argument / std::out_of_range.

// alpha_i(x) = x_i / sum_j x_j, the relative computing power of miner i.
double relative_power(const DemandProfile& x, std::size_t i);

// P_orphan(t) = 1 - exp(-lambda * z * t): the mined block is discarded
// because propagating t transactions loses the consensus race.
double orphan_probability(double block_size, const MarketParams& params);

// P_i(x, t_i) = alpha_i(x) * exp(-lambda * z * t_i): miner i both wins the
// mining race and dodges orphaning.
double win_probability(const DemandProfile& x, std::size_t i,
                       const std::vector<MinerProfile>& profiles,
                       const MarketParams& params);

// a(t) = (R + r t) * exp(-lambda z t), the orphan-discounted expected block
// reward. This coefficient drives every Stage-I/Stage-II expression.
double reward_coefficient(double block_size, const MarketParams& params);

std::vector<double> reward_coefficients(
    const std::vector<MinerProfile>& profiles, const MarketParams& params);

// u_i = (R + r t_i) * P_i(x, t_i) - p_i * x_i.
double miner_utility(const DemandProfile& x, const PriceSchedule& p,
                     std::size_t i, const std::vector<MinerProfile>& profiles,
                     const MarketParams& params);

// Pi = sum_i p_i x_i - sum_i c T x_i.
double esp_profit(const DemandProfile& x, const PriceSchedule& p,
                  const MarketParams& params);

// Monte Carlo oracle for the win-probability model. Per trial a provisional
// winner is drawn with probability alpha_i(x), then discarded with
// probability P_orphan(t_i); returns per-miner win counts / trials.
// Deterministic for a fixed seed.
std::vector<double> simulate_mining_race(
    const DemandProfile& x, const std::vector<MinerProfile>& profiles,
    const MarketParams& params, std::int64_t trials, std::uint64_t seed);

}  // namespace stackedge
