#include "stackedge/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "stackedge/economics.hpp"

namespace stackedge {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

double clamp_to_box(double v, const MarketParams& params) {
  return std::clamp(v, params.demand_min, params.demand_max);
}

// Unconstrained stationary point of miner i's utility given the aggregate
// opponent demand. Negative values are meaningful (they fall to the lower
// clamp).
double stationary_candidate(double coefficient, double price,
                            double opponent_total) {
  return std::sqrt(coefficient * opponent_total / price) - opponent_total;
}

ClosedFormResult closed_form_impl(const std::vector<double>& coefficients,
                                  const std::vector<double>& prices,
                                  const MarketParams& params) {
  const std::size_t n = coefficients.size();
  ClosedFormResult result;
  result.demands.resize(n);

  double ratio_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    ratio_sum += prices[j] / coefficients[j];
  }
  const double total = (static_cast<double>(n) - 1.0) / ratio_sum;
  result.total = total;

  bool interior = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = total - total * total * prices[i] / coefficients[i];
    result.demands[i] = v;
    if (!(v > params.demand_min) || !(v < params.demand_max)) {
      interior = false;
    }
  }
  result.interior = interior;
  return result;
}

ConditionCheck condition_check_impl(const std::vector<double>& weights,
                                    std::size_t n) {
  // weights[i] plays the role of p_i / a_i; the uniform check passes 1/a_i.
  ConditionCheck check;
  double rhs = 0.0;
  for (double w : weights) rhs += w;
  check.rhs = rhs;
  check.lhs = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double lhs = 2.0 * (static_cast<double>(n) - 1.0) * weights[i];
    if (lhs > check.lhs) {
      check.lhs = lhs;
      check.worst_miner = i;
    }
  }
  check.holds = check.lhs < check.rhs;
  return check;
}

}  // namespace

double best_response(std::size_t i, const DemandProfile& x,
                     const PriceSchedule& p,
                     const std::vector<MinerProfile>& profiles,
                     const MarketParams& params, double min_price) {
  require(profiles.size() >= 2,
          "best_response requires at least two miners; the single-miner game "
          "is degenerate");
  if (i >= profiles.size()) {
    throw std::out_of_range("miner index out of range");
  }
  require(x.size() == profiles.size() && p.size() == profiles.size(),
          "demands, prices and profiles must have the same length");
  require(p[i] >= min_price,
          "prices.values[" + std::to_string(i) + "]: price must be >= " +
              std::to_string(min_price));

  double opponents = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j != i) opponents += x[j];
  }
  const double a = reward_coefficient(profiles[i].block_size, params);
  return clamp_to_box(stationary_candidate(a, p[i], opponents), params);
}

ConditionCheck check_uniqueness_uniform(
    const std::vector<MinerProfile>& profiles, const MarketParams& params) {
  require(profiles.size() >= 2, "uniqueness check requires N >= 2");
  std::vector<double> weights(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    weights[i] = 1.0 / reward_coefficient(profiles[i].block_size, params);
  }
  return condition_check_impl(weights, profiles.size());
}

ConditionCheck check_uniqueness_discriminatory(
    const std::vector<MinerProfile>& profiles, const PriceSchedule& p,
    const MarketParams& params) {
  require(profiles.size() >= 2, "uniqueness check requires N >= 2");
  require(p.size() == profiles.size(),
          "prices and profiles must have the same length");
  std::vector<double> weights(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    weights[i] = p[i] / reward_coefficient(profiles[i].block_size, params);
  }
  return condition_check_impl(weights, profiles.size());
}

bool in_standard_region(const DemandProfile& x, const PriceSchedule& p,
                        const std::vector<MinerProfile>& profiles,
                        const MarketParams& params) {
  const std::size_t n = profiles.size();
  require(x.size() == n && p.size() == n,
          "demands, prices and profiles must have the same length");
  const double total = x.total();
  for (std::size_t i = 0; i < n; ++i) {
    const double opponents = total - x[i];
    const double a = reward_coefficient(profiles[i].block_size, params);
    if (!(opponents < a / (4.0 * p[i]))) return false;
  }
  return true;
}

ClosedFormResult closed_form_uniform(const std::vector<MinerProfile>& profiles,
                                     double price,
                                     const MarketParams& params) {
  require(profiles.size() >= 2, "closed form requires N >= 2");
  require(price > 0.0, "price must be > 0");
  const std::vector<double> a = reward_coefficients(profiles, params);
  return closed_form_impl(a, std::vector<double>(profiles.size(), price),
                          params);
}

ClosedFormResult closed_form_discriminatory(
    const std::vector<MinerProfile>& profiles, const PriceSchedule& p,
    const MarketParams& params) {
  require(profiles.size() >= 2, "closed form requires N >= 2");
  require(p.size() == profiles.size(),
          "prices and profiles must have the same length");
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] > 0.0,
            "prices.values[" + std::to_string(i) + "]: price must be > 0");
  }
  const std::vector<double> a = reward_coefficients(profiles, params);
  return closed_form_impl(a, p.prices, params);
}

EquilibriumReport solve_mdg(const std::vector<MinerProfile>& profiles,
                            const PriceSchedule& p, const MarketParams& params,
                            const SolverConfig& config,
                            const std::optional<DemandProfile>& x0) {
  validate_profiles(profiles);
  validate_market(params);
  validate_prices(p, params, config.min_price);
  require(p.size() == profiles.size(),
          "prices and profiles must have the same length");
  require(config.tolerance > 0.0, "solver.tolerance: must be > 0");
  require(config.max_iterations >= 1, "solver.max_iterations: must be >= 1");
  require(config.damping > 0.0 && config.damping <= 1.0,
          "solver.damping: must be in (0, 1]");

  const std::size_t n = profiles.size();
  EquilibriumReport report;

  if (n == 1) {
    // alpha == 1 regardless of demand, so utility decreases in x: the
    // optimum is the lower bound.
    report.demands.demands = {params.demand_min};
    report.utilities = {miner_utility(report.demands, p, 0, profiles, params)};
    report.esp_profit = esp_profit(report.demands, p, params);
    report.iterations = 0;
    report.converged = true;
    report.uniqueness_condition_holds = true;
    report.interior = false;
    return report;
  }

  const std::vector<double> a = reward_coefficients(profiles, params);

  std::vector<double> x(n, params.demand_min);
  if (x0.has_value()) {
    validate_demands(*x0, params);
    require(x0->size() == n, "x0 must have one demand per miner");
    x = x0->demands;
  }

  const double weight =
      std::min(config.damping, 4.0 / (static_cast<double>(n) + 1.0));

  std::vector<double> next(n);
  bool converged = false;
  int iterations = 0;
  for (; iterations < config.max_iterations; ++iterations) {
    double total = 0.0;
    for (double v : x) total += v;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double opponents = total - x[i];
      const double response =
          clamp_to_box(stationary_candidate(a[i], p[i], opponents), params);
      next[i] = (1.0 - weight) * x[i] + weight * response;
      change = std::max(change, std::abs(next[i] - x[i]));
    }
    x.swap(next);
    if (change < config.tolerance) {
      converged = true;
      ++iterations;
      break;
    }
  }

  if (converged) {
    // Coordinates pinned by the clamp approach their bound geometrically
    // from inside and stop one tolerance short; land them exactly on it.
    double total = 0.0;
    for (double v : x) total += v;
    for (std::size_t i = 0; i < n; ++i) {
      const double candidate =
          stationary_candidate(a[i], p[i], total - x[i]);
      if (candidate <= params.demand_min) {
        x[i] = params.demand_min;
      } else if (candidate >= params.demand_max) {
        x[i] = params.demand_max;
      }
    }
  }

  report.demands.demands = x;
  report.utilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    report.utilities[i] = miner_utility(report.demands, p, i, profiles, params);
  }
  report.esp_profit = esp_profit(report.demands, p, params);
  report.iterations = iterations;
  report.converged = converged;

  const ConditionCheck check =
      p.scheme == PricingScheme::kUniform
          ? check_uniqueness_uniform(profiles, params)
          : check_uniqueness_discriminatory(profiles, p, params);
  report.uniqueness_condition_holds = check.holds;

  report.interior = true;
  for (double v : x) {
    if (v <= params.demand_min || v >= params.demand_max) {
      report.interior = false;
      break;
    }
  }
  return report;
}

DeviationReport verify_nash(const DemandProfile& x, const PriceSchedule& p,
                            const std::vector<MinerProfile>& profiles,
                            const MarketParams& params, int grid_points) {
  const std::size_t n = profiles.size();
  require(x.size() == n && p.size() == n,
          "demands, prices and profiles must have the same length");
  require(grid_points >= 2, "grid_points must be >= 2");

  const std::vector<double> a = reward_coefficients(profiles, params);
  const double total = x.total();

  DeviationReport report;
  for (std::size_t i = 0; i < n; ++i) {
    const double opponents = total - x[i];
    const double base_utility =
        a[i] * x[i] / (opponents + x[i]) - p[i] * x[i];

    auto utility_at = [&](double xi) {
      return a[i] * xi / (opponents + xi) - p[i] * xi;
    };

    double best_gain = 0.0;
    const double step = (params.demand_max - params.demand_min) /
                        static_cast<double>(grid_points - 1);
    for (int k = 0; k < grid_points; ++k) {
      const double xi = params.demand_min + step * static_cast<double>(k);
      best_gain = std::max(best_gain, utility_at(xi) - base_utility);
    }
    // The stationary candidate is always scanned so grid resolution cannot
    // mask an interior optimum.
    if (opponents > 0.0) {
      const double candidate = std::clamp(
          stationary_candidate(a[i], p[i], opponents), params.demand_min,
          params.demand_max);
      best_gain = std::max(best_gain, utility_at(candidate) - base_utility);
    }

    const double relative =
        best_gain / std::max(1.0, std::abs(base_utility));
    if (best_gain > report.max_gain) {
      report.max_gain = best_gain;
      report.worst_miner = i;
    }
    report.max_relative_gain = std::max(report.max_relative_gain, relative);
  }
  return report;
}

}  // namespace stackedge
