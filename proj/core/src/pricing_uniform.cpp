#include "stackedge/pricing_uniform.hpp"

#include <cmath>
#include <stdexcept>

#include "stackedge/economics.hpp"

namespace stackedge {

namespace {

double inverse_coefficient_sum(const std::vector<MinerProfile>& profiles,
                               const MarketParams& params) {
  double sum = 0.0;
  for (const auto& miner : profiles) {
    sum += 1.0 / reward_coefficient(miner.block_size, params);
  }
  return sum;
}

}  // namespace

double reduced_profit_uniform(double price,
                              const std::vector<MinerProfile>& profiles,
                              const MarketParams& params) {
  if (!(price > 0.0)) throw std::invalid_argument("price must be > 0");
  if (profiles.size() < 2) {
    throw std::invalid_argument("reduced profit requires N >= 2");
  }
  const double n = static_cast<double>(profiles.size());
  const double margin_ratio =
      (price - params.electricity_cost * params.mining_time) / price;
  return margin_ratio * (n - 1.0) / inverse_coefficient_sum(profiles, params);
}

double profit_derivative_uniform(double price,
                                 const std::vector<MinerProfile>& profiles,
                                 const MarketParams& params) {
  if (!(price > 0.0)) throw std::invalid_argument("price must be > 0");
  if (profiles.size() < 2) {
    throw std::invalid_argument("profit derivative requires N >= 2");
  }
  const double n = static_cast<double>(profiles.size());
  const double ct = params.electricity_cost * params.mining_time;
  return (ct / (price * price)) * (n - 1.0) /
         inverse_coefficient_sum(profiles, params);
}

UniformOptimum optimize_uniform(const std::vector<MinerProfile>& profiles,
                                const MarketParams& params,
                                const SolverConfig& config, int grid_points) {
  validate_profiles(profiles);
  validate_market(params);
  if (profiles.size() < 2) {
    throw std::invalid_argument("optimize_uniform requires N >= 2");
  }
  if (grid_points < 2) {
    throw std::invalid_argument("grid_points must be >= 2");
  }

  UniformOptimum result;
  result.price = params.price_cap;
  result.reduced_profit =
      reduced_profit_uniform(result.price, profiles, params);

  const PriceSchedule cap_schedule =
      PriceSchedule::uniform(profiles.size(), result.price);
  result.equilibrium = solve_mdg(profiles, cap_schedule, params, config);

  const ClosedFormResult closed =
      closed_form_uniform(profiles, result.price, params);
  if (closed.interior && result.equilibrium.converged) {
    result.path = ProfitPath::kClosedForm;
    result.profit = result.reduced_profit;
  } else {
    // The cap equilibrium has clamped demands; the reduced form no longer
    // applies, so price the dynamics outcome directly.
    result.path = ProfitPath::kDynamics;
    result.profit = result.equilibrium.esp_profit;
  }

  // Regression guard: the derivative is positive, so no grid price may beat
  // the cap.
  result.grid_best_price = result.price;
  result.grid_best_profit = result.reduced_profit;
  for (int k = 1; k <= grid_points; ++k) {
    const double p =
        params.price_cap * static_cast<double>(k) / grid_points;
    const double profit = reduced_profit_uniform(p, profiles, params);
    if (profit > result.grid_best_profit) {
      result.grid_best_profit = profit;
      result.grid_best_price = p;
    }
  }
  result.grid_confirmed = result.grid_best_price == params.price_cap;
  return result;
}

}  // namespace stackedge
