#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stackedge/equilibrium.hpp"
#include "stackedge/types.hpp"

namespace stackedge {

// Concavity-regime diagnostics for the discriminatory profit.
// delta[i] = sum_{j != i} (a_i + a_j) * (1 - N (p_j/a_j) / sum_h (p_h/a_h));
// the profit is coordinate-concave where all delta <= 0. condition_22_holds
// checks p_i / a_i >= sum_j (p_j / a_j) / (N-1)^2 for every i.
struct RegimeCheck {
  std::vector<double> delta;
  bool concave_region = false;
  bool condition_22_holds = false;
};

// Stage-I profit under discriminatory pricing, evaluated through the
// interior Stage-II equilibrium: Pi(p) = sum_i (p_i - cT) * x_i*(p).
// Requires all p_i in [min_price, price_cap] and N >= 2.
double profit_discriminatory(const PriceSchedule& p,
                             const std::vector<MinerProfile>& profiles,
                             const MarketParams& params,
                             double min_price = kMinPrice);

// Revenue component g(p) = sum_i p_i x_i*(p).
double revenue_term(const PriceSchedule& p,
                    const std::vector<MinerProfile>& profiles,
                    const MarketParams& params, double min_price = kMinPrice);

// Cost component f(p) = -cT * sum_i x_i*(p) = -cT (N-1) / sum_j (p_j/a_j);
// profit = revenue_term + cost_term exactly.
double cost_term(const PriceSchedule& p,
                 const std::vector<MinerProfile>& profiles,
                 const MarketParams& params, double min_price = kMinPrice);

// Analytic gradient of profit_discriminatory.
std::vector<double> profit_gradient(const PriceSchedule& p,
                                    const std::vector<MinerProfile>& profiles,
                                    const MarketParams& params,
                                    double min_price = kMinPrice);

// Analytic gradient of the cost component,
// df/dp_i = (N-1) cT / (a_i * (sum_j p_j/a_j)^2); strictly positive.
std::vector<double> cost_term_gradient(
    const PriceSchedule& p, const std::vector<MinerProfile>& profiles,
    const MarketParams& params, double min_price = kMinPrice);

// Quadratic form v' H_f v of the cost-component Hessian,
// H_f = -2 cT (N-1) / s^3 * (1/a)(1/a)', a rank-one negative semi-definite
// matrix. Always <= 0.
double cost_term_quadratic_form(const PriceSchedule& p,
                                const std::vector<MinerProfile>& profiles,
                                const MarketParams& params,
                                std::span<const double> v,
                                double min_price = kMinPrice);

RegimeCheck regime_check(const PriceSchedule& p,
                         const std::vector<MinerProfile>& profiles,
                         const MarketParams& params);

struct AscentOptions {
  double tolerance = 1e-8;  // projected-gradient sup-norm
  int max_steps = 50000;
  double initial_step = 1.0;
  double min_price = kMinPrice;
  bool verbose = false;  // stream regime status per accepted step to stderr
};

struct DiscriminatoryOptimum {
  PriceSchedule prices;
  double profit = 0.0;
  EquilibriumReport equilibrium;  // Stage-II outcome at the optimum
  RegimeCheck regime;             // evaluated at the optimum
  bool converged = false;
  int steps = 0;
  double projected_gradient_norm = 0.0;
  std::size_t at_cap_count = 0;  // prices pinned at the cap
};

// Projected gradient ascent over the box [min_price, price_cap]^N from the
// all-cap corner. Steps use a Barzilai-Borwein length safeguarded by an
// Armijo backtracking (halving) line search; the acceptance threshold
// carries a machine-precision slack so progress is not blocked once true
// profit increments fall below representable differences. Terminates when
// the projected-gradient sup-norm drops below `tolerance`. Non-convergence
// is reported via the flag, with the last iterate returned.
DiscriminatoryOptimum optimize_discriminatory(
    const std::vector<MinerProfile>& profiles, const MarketParams& params,
    const AscentOptions& opts = {}, const SolverConfig& stage2 = {});

// Sampled monotonicity probe of F = -grad(Pi) over the concave region
// (all delta <= 0 and the ratio floor of RegimeCheck satisfied): draws
// pairs (p, p') in the region and evaluates (F(p) - F(p')) . (p - p').
// Strict monotonicity of F
// predicts every value > 0. Region points are built constructively around
// equal price/coefficient ratios; when the region admits no sampled
// heterogeneity the probe reports how many pairs it found rather than
// failing.
struct ViProbeResult {
  double min_inner_product = 0.0;
  int pairs_found = 0;
  int pairs_requested = 0;
};

ViProbeResult vi_monotonicity_probe(const std::vector<MinerProfile>& profiles,
                                    const MarketParams& params, int samples,
                                    std::uint64_t seed);

}  // namespace stackedge
