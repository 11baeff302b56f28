#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stackedge/types.hpp"

namespace stackedge {

// Stage-II solver configuration. `damping` is the relaxation weight on the
// new best response; the solver additionally caps the effective weight at
// 4/(N+1), see solve_mdg.
struct SolverConfig {
  double tolerance = 1e-9;   // sup-norm convergence threshold
  int max_iterations = 10000;
  double damping = 0.5;      // in (0, 1]
  double min_price = kMinPrice;
};

// Outcome of a uniqueness-condition evaluation. `holds` iff lhs < rhs for
// the worst (maximal-lhs) miner.
struct ConditionCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  std::size_t worst_miner = 0;
};

// Stage-II best response of miner i given opponents' demands: the
// unconstrained stationary point sqrt(a_i * S / p_i) - S with
// S = sum_{j != i} x_j, clamped to the demand box. Requires N >= 2 and
// p_i >= min_price.
double best_response(std::size_t i, const DemandProfile& x,
                     const PriceSchedule& p,
                     const std::vector<MinerProfile>& profiles,
                     const MarketParams& params,
                     double min_price = kMinPrice);

// Sufficient condition for Stage-II uniqueness under uniform pricing, per
// miner i: 2 (N-1) / a_i < sum_j 1 / a_j. `holds` requires the inequality
// for every i.
//
// The inequality cannot hold for all miners simultaneously for any N >= 2
// (summing it over i gives 2(N-1) < N). It is evaluated and reported
// verbatim as a diagnostic; equilibria are validated independently through
// verify_nash. See in_standard_region for the state-level bound that the
// standard-function properties actually rest on.
ConditionCheck check_uniqueness_uniform(
    const std::vector<MinerProfile>& profiles, const MarketParams& params);

// Discriminatory variant: 2 (N-1) p_i / a_i < sum_j p_j / a_j.
ConditionCheck check_uniqueness_discriminatory(
    const std::vector<MinerProfile>& profiles, const PriceSchedule& p,
    const MarketParams& params);

// State-level regularity region of the best-response map at demands x:
// sum_{j != i} x_j < a_i / (4 p_i) for every miner. Inside it the
// unconstrained best response is positive and increasing in opponents'
// demands.
bool in_standard_region(const DemandProfile& x, const PriceSchedule& p,
                        const std::vector<MinerProfile>& profiles,
                        const MarketParams& params);

// Interior Nash equilibrium in closed form:
//   x_i* = K - K^2 * p_i / a_i,  K = (N-1) / sum_j (p_j / a_j),
// with sum_j x_j* = K. `interior` is false when any component leaves the
// demand box, in which case callers must fall back to best-response
// dynamics.
struct ClosedFormResult {
  std::vector<double> demands;  // raw closed-form values, not clamped
  double total = 0.0;           // K
  bool interior = false;
};

ClosedFormResult closed_form_uniform(const std::vector<MinerProfile>& profiles,
                                     double price, const MarketParams& params);

ClosedFormResult closed_form_discriminatory(
    const std::vector<MinerProfile>& profiles, const PriceSchedule& p,
    const MarketParams& params);

// Computes the Stage-II Nash equilibrium by damped Jacobi best-response
// iteration from x0 (default: every demand at the lower bound). The
// effective relaxation weight is min(config.damping, 4/(N+1)): near an
// interior equilibrium the aggregate mode of the response map has slope
// about 1 - N/2, so fixed weights lose stability once N exceeds ~8.
//
// N = 1 is degenerate (alpha == 1 makes utility strictly decreasing in
// demand): returns the lower bound directly, converged, 0 iterations.
// Non-convergence is reported through the `converged` flag, never thrown.
EquilibriumReport solve_mdg(const std::vector<MinerProfile>& profiles,
                            const PriceSchedule& p, const MarketParams& params,
                            const SolverConfig& config = {},
                            const std::optional<DemandProfile>& x0 = {});

// Deviation oracle. Scans `grid_points` equally spaced demands over the box
// plus the stationary candidate for each miner and reports the best
// unilateral utility improvement. A Nash equilibrium yields max_gain within
// numerical tolerance of zero.
struct DeviationReport {
  double max_gain = 0.0;
  double max_relative_gain = 0.0;  // gain_i / max(1, |u_i|), worst miner
  std::size_t worst_miner = 0;
};

DeviationReport verify_nash(const DemandProfile& x, const PriceSchedule& p,
                            const std::vector<MinerProfile>& profiles,
                            const MarketParams& params, int grid_points);

}  // namespace stackedge
