#pragma once

#include <vector>

#include "stackedge/equilibrium.hpp"
#include "stackedge/types.hpp"

namespace stackedge {

// Stage-I profit under uniform pricing, reduced through the interior
// Stage-II equilibrium:
//   Pi(p) = (p - cT) * (N-1) / sum_j (p / a_j) = ((p - cT)/p) * (N-1) / sum_j (1/a_j).
// Requires p > 0 and N >= 2. Valid only where the closed form is interior.
double reduced_profit_uniform(double price,
                              const std::vector<MinerProfile>& profiles,
                              const MarketParams& params);

// d Pi / d p = (cT / p^2) * (N-1) / sum_j (1/a_j); strictly positive for all
// p > 0 whenever cT > 0, so the profit is increasing up to the price cap.
double profit_derivative_uniform(double price,
                                 const std::vector<MinerProfile>& profiles,
                                 const MarketParams& params);

enum class ProfitPath { kClosedForm, kDynamics };

struct UniformOptimum {
  double price = 0.0;             // always the price cap
  double profit = 0.0;            // authoritative value, see `path`
  double reduced_profit = 0.0;    // interior reduced form at `price`
  ProfitPath path = ProfitPath::kClosedForm;
  EquilibriumReport equilibrium;  // Stage-II outcome at `price`
  bool grid_confirmed = false;    // scan found no better grid price
  double grid_best_price = 0.0;
  double grid_best_profit = 0.0;
};

// The derivative above is positive on (0, p_cap], so the optimum is the cap;
// returned analytically, with a `grid_points`-point scan over (0, p_cap]
// retained as a regression guard. When the induced equilibrium at the cap is
// non-interior the authoritative profit is recomputed from the dynamics
// equilibrium and `path` records that.
UniformOptimum optimize_uniform(const std::vector<MinerProfile>& profiles,
                                const MarketParams& params,
                                const SolverConfig& config = {},
                                int grid_points = 1000);

}  // namespace stackedge
