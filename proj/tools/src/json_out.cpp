#include "stackedge_cli/json_out.hpp"

#include <algorithm>

namespace stackedge::cli {

Json equilibrium_json(const EquilibriumReport& report) {
  Json j;
  j["demands"] = report.demands.demands;
  j["total_demand"] = report.demands.total();
  j["utilities"] = report.utilities;
  j["esp_profit"] = report.esp_profit;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["uniqueness_condition_holds"] = report.uniqueness_condition_holds;
  j["interior"] = report.interior;
  return j;
}

Json condition_json(const ConditionCheck& check) {
  Json j;
  j["holds"] = check.holds;
  j["lhs"] = check.lhs;
  j["rhs"] = check.rhs;
  j["worst_miner"] = check.worst_miner;
  return j;
}

Json deviation_json(const DeviationReport& report) {
  Json j;
  j["max_gain"] = report.max_gain;
  j["max_relative_gain"] = report.max_relative_gain;
  j["worst_miner"] = report.worst_miner;
  return j;
}

Json regime_json(const RegimeCheck& regime) {
  Json j;
  j["concave_region"] = regime.concave_region;
  j["condition_22_holds"] = regime.condition_22_holds;
  const auto it = std::max_element(regime.delta.begin(), regime.delta.end());
  j["max_delta"] = it == regime.delta.end() ? 0.0 : *it;
  j["delta"] = regime.delta;
  return j;
}

Json uniform_optimum_json(const UniformOptimum& result) {
  Json j;
  j["price"] = result.price;
  j["profit"] = result.profit;
  j["reduced_profit"] = result.reduced_profit;
  j["profit_path"] =
      result.path == ProfitPath::kClosedForm ? "closed_form" : "dynamics";
  j["grid_confirmed"] = result.grid_confirmed;
  j["grid_best_price"] = result.grid_best_price;
  j["equilibrium"] = equilibrium_json(result.equilibrium);
  return j;
}

Json discriminatory_optimum_json(const DiscriminatoryOptimum& result) {
  Json j;
  j["prices"] = result.prices.prices;
  double mean = 0.0;
  for (double p : result.prices.prices) mean += p;
  if (!result.prices.prices.empty()) {
    mean /= static_cast<double>(result.prices.prices.size());
  }
  j["mean_price"] = mean;
  j["profit"] = result.profit;
  j["converged"] = result.converged;
  j["steps"] = result.steps;
  j["projected_gradient_norm"] = result.projected_gradient_norm;
  j["at_cap_count"] = result.at_cap_count;
  j["regime"] = regime_json(result.regime);
  j["equilibrium"] = equilibrium_json(result.equilibrium);
  return j;
}

}  // namespace stackedge::cli
