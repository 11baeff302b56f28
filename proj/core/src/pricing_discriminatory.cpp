#include "stackedge/pricing_discriminatory.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "stackedge/economics.hpp"
#include "stackedge/rng.hpp"

namespace stackedge {

namespace {

struct Ratios {
  std::vector<double> a;  // reward coefficients
  std::vector<double> y;  // p_i / a_i
  double s = 0.0;         // sum of y
  double total = 0.0;     // K = (N-1) / s, total equilibrium demand
};

Ratios make_ratios(const std::vector<double>& prices,
                   const std::vector<MinerProfile>& profiles,
                   const MarketParams& params) {
  Ratios r;
  r.a = reward_coefficients(profiles, params);
  const std::size_t n = prices.size();
  r.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.y[i] = prices[i] / r.a[i];
    r.s += r.y[i];
  }
  r.total = (static_cast<double>(n) - 1.0) / r.s;
  return r;
}

void check_inputs(const PriceSchedule& p,
                  const std::vector<MinerProfile>& profiles,
                  const MarketParams& params, double min_price) {
  if (profiles.size() < 2) {
    throw std::invalid_argument("discriminatory pricing requires N >= 2");
  }
  if (p.size() != profiles.size()) {
    throw std::invalid_argument(
        "prices and profiles must have the same length");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= min_price)) {
      throw std::invalid_argument("prices.values[" + std::to_string(i) +
                                  "]: price must be >= " +
                                  std::to_string(min_price));
    }
    if (!(p[i] <= params.price_cap)) {
      throw std::invalid_argument("prices.values[" + std::to_string(i) +
                                  "]: price above market.price_cap");
    }
  }
}

double profit_from_ratios(const std::vector<double>& prices, const Ratios& r,
                          double ct) {
  const double k = r.total;
  double profit = 0.0;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    const double x = k - k * k * r.y[i];
    profit += (prices[i] - ct) * x;
  }
  return profit;
}

void gradient_from_ratios(const std::vector<double>& prices, const Ratios& r,
                          double ct, std::vector<double>& grad) {
  const std::size_t n = prices.size();
  const double k = r.total;
  // d Pi / d p_i = x_i + dK/dp_i * sum_j (p_j - cT)(1 - 2 K y_j)
  //               - (p_i - cT) K^2 / a_i,  with dK/dp_i = -K / (s a_i).
  double weighted = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    weighted += (prices[j] - ct) * (1.0 - 2.0 * k * r.y[j]);
  }
  grad.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = k - k * k * r.y[i];
    const double dk = -k / (r.s * r.a[i]);
    grad[i] = x + dk * weighted - (prices[i] - ct) * k * k / r.a[i];
  }
}

}  // namespace

double profit_discriminatory(const PriceSchedule& p,
                             const std::vector<MinerProfile>& profiles,
                             const MarketParams& params, double min_price) {
  check_inputs(p, profiles, params, min_price);
  const Ratios r = make_ratios(p.prices, profiles, params);
  return profit_from_ratios(p.prices, r,
                            params.electricity_cost * params.mining_time);
}

double revenue_term(const PriceSchedule& p,
                    const std::vector<MinerProfile>& profiles,
                    const MarketParams& params, double min_price) {
  check_inputs(p, profiles, params, min_price);
  const Ratios r = make_ratios(p.prices, profiles, params);
  return profit_from_ratios(p.prices, r, 0.0);
}

double cost_term(const PriceSchedule& p,
                 const std::vector<MinerProfile>& profiles,
                 const MarketParams& params, double min_price) {
  check_inputs(p, profiles, params, min_price);
  const Ratios r = make_ratios(p.prices, profiles, params);
  return -params.electricity_cost * params.mining_time * r.total;
}

std::vector<double> profit_gradient(const PriceSchedule& p,
                                    const std::vector<MinerProfile>& profiles,
                                    const MarketParams& params,
                                    double min_price) {
  check_inputs(p, profiles, params, min_price);
  const Ratios r = make_ratios(p.prices, profiles, params);
  std::vector<double> grad;
  gradient_from_ratios(p.prices, r,
                       params.electricity_cost * params.mining_time, grad);
  return grad;
}

std::vector<double> cost_term_gradient(
    const PriceSchedule& p, const std::vector<MinerProfile>& profiles,
    const MarketParams& params, double min_price) {
  check_inputs(p, profiles, params, min_price);
  const Ratios r = make_ratios(p.prices, profiles, params);
  const double n = static_cast<double>(p.size());
  const double ct = params.electricity_cost * params.mining_time;
  std::vector<double> grad(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    grad[i] = (n - 1.0) * ct / (r.a[i] * r.s * r.s);
  }
  return grad;
}

double cost_term_quadratic_form(const PriceSchedule& p,
                                const std::vector<MinerProfile>& profiles,
                                const MarketParams& params,
                                std::span<const double> v, double min_price) {
  check_inputs(p, profiles, params, min_price);
  if (v.size() != p.size()) {
    throw std::invalid_argument("v must have one entry per miner");
  }
  const Ratios r = make_ratios(p.prices, profiles, params);
  const double n = static_cast<double>(p.size());
  const double ct = params.electricity_cost * params.mining_time;
  double dot = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += v[i] / r.a[i];
  }
  return -2.0 * ct * (n - 1.0) / (r.s * r.s * r.s) * dot * dot;
}

RegimeCheck regime_check(const PriceSchedule& p,
                         const std::vector<MinerProfile>& profiles,
                         const MarketParams& params) {
  if (profiles.size() < 2) {
    throw std::invalid_argument("regime check requires N >= 2");
  }
  if (p.size() != profiles.size()) {
    throw std::invalid_argument(
        "prices and profiles must have the same length");
  }
  const std::size_t n = p.size();
  const Ratios r = make_ratios(p.prices, profiles, params);

  // factor_j = 1 - N y_j / s; delta_i = sum_{j != i} (a_i + a_j) factor_j.
  std::vector<double> factor(n);
  double factor_sum = 0.0;
  double weighted_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    factor[j] = 1.0 - static_cast<double>(n) * r.y[j] / r.s;
    factor_sum += factor[j];
    weighted_sum += r.a[j] * factor[j];
  }

  RegimeCheck check;
  check.delta.resize(n);
  double max_delta = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    check.delta[i] = r.a[i] * (factor_sum - factor[i]) +
                     (weighted_sum - r.a[i] * factor[i]);
    max_delta = std::max(max_delta, check.delta[i]);
  }
  check.concave_region = max_delta <= 0.0;

  const double threshold =
      r.s / ((static_cast<double>(n) - 1.0) * (static_cast<double>(n) - 1.0));
  check.condition_22_holds = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(r.y[i] >= threshold)) {
      check.condition_22_holds = false;
      break;
    }
  }
  return check;
}

DiscriminatoryOptimum optimize_discriminatory(
    const std::vector<MinerProfile>& profiles, const MarketParams& params,
    const AscentOptions& opts, const SolverConfig& stage2) {
  validate_profiles(profiles);
  validate_market(params);
  if (profiles.size() < 2) {
    throw std::invalid_argument("optimize_discriminatory requires N >= 2");
  }
  if (!(opts.tolerance > 0.0)) {
    throw std::invalid_argument("ascent.tolerance: must be > 0");
  }
  if (opts.max_steps < 1) {
    throw std::invalid_argument("ascent.max_steps: must be >= 1");
  }

  const std::size_t n = profiles.size();
  const double ct = params.electricity_cost * params.mining_time;
  const double cap = params.price_cap;
  const double floor = opts.min_price;

  std::vector<double> prices(n, cap);
  Ratios ratios = make_ratios(prices, profiles, params);
  double profit = profit_from_ratios(prices, ratios, ct);
  std::vector<double> grad;
  gradient_from_ratios(prices, ratios, ct, grad);

  auto projected_gradient_norm = [&](const std::vector<double>& p,
                                     const std::vector<double>& g) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] >= cap && g[i] > 0.0) continue;
      if (p[i] <= floor && g[i] < 0.0) continue;
      norm = std::max(norm, std::abs(g[i]));
    }
    return norm;
  };

  std::vector<double> candidate(n), candidate_grad(n), step_vec(n),
      grad_change(n);
  double step = opts.initial_step;
  bool have_history = false;
  bool converged = false;
  int steps = 0;
  double pg_norm = projected_gradient_norm(prices, grad);

  for (; steps < opts.max_steps; ++steps) {
    pg_norm = projected_gradient_norm(prices, grad);
    if (pg_norm < opts.tolerance) {
      converged = true;
      break;
    }

    if (have_history) {
      // Barzilai-Borwein length from the last accepted step.
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        ss += step_vec[i] * step_vec[i];
        sy += step_vec[i] * grad_change[i];
      }
      if (std::abs(sy) > 1e-300) step = ss / std::abs(sy);
    }
    step = std::clamp(step, 1e-14, 1e14);

    // Armijo halving with a machine-precision slack: once true profit
    // increments shrink below representable differences, exact acceptance
    // would reject every step and stall the gradient norm. A candidate whose
    // projected-gradient norm does not grow is also accepted; that signal
    // stays informative after profit differences drown in roundoff.
    const double slack = 16.0 * DBL_EPSILON * std::max(1.0, std::abs(profit));
    bool accepted = false;
    double candidate_profit = 0.0;
    for (int halving = 0; halving < 70; ++halving) {
      double directional = 0.0;
      double moved = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        candidate[i] = std::clamp(prices[i] + step * grad[i], floor, cap);
        directional += grad[i] * (candidate[i] - prices[i]);
        moved = std::max(moved, std::abs(candidate[i] - prices[i]));
      }
      if (moved == 0.0) break;
      Ratios candidate_ratios = make_ratios(candidate, profiles, params);
      candidate_profit = profit_from_ratios(candidate, candidate_ratios, ct);
      if (candidate_profit >= profit + 1e-4 * directional - slack) {
        gradient_from_ratios(candidate, candidate_ratios, ct, candidate_grad);
        accepted = true;
        break;
      }
      gradient_from_ratios(candidate, candidate_ratios, ct, candidate_grad);
      if (projected_gradient_norm(candidate, candidate_grad) <= pg_norm) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    for (std::size_t i = 0; i < n; ++i) {
      step_vec[i] = candidate[i] - prices[i];
      grad_change[i] = -(candidate_grad[i] - grad[i]);
    }
    have_history = true;
    prices.swap(candidate);
    grad.swap(candidate_grad);
    profit = candidate_profit;

    if (opts.verbose) {
      const RegimeCheck rc = regime_check(
          PriceSchedule::discriminatory(prices), profiles, params);
      std::cerr << "step " << steps << " profit " << profit << " pg "
                << projected_gradient_norm(prices, grad) << " concave "
                << (rc.concave_region ? "yes" : "no") << '\n';
    }
  }

  DiscriminatoryOptimum result;
  result.prices = PriceSchedule::discriminatory(prices);
  result.profit = profit;
  result.converged = converged;
  result.steps = steps;
  result.projected_gradient_norm = projected_gradient_norm(prices, grad);
  result.at_cap_count = static_cast<std::size_t>(
      std::count_if(prices.begin(), prices.end(),
                    [&](double p) { return p >= cap; }));
  result.regime = regime_check(result.prices, profiles, params);
  result.equilibrium = solve_mdg(profiles, result.prices, params, stage2);
  return result;
}

ViProbeResult vi_monotonicity_probe(const std::vector<MinerProfile>& profiles,
                                    const MarketParams& params, int samples,
                                    std::uint64_t seed) {
  validate_profiles(profiles);
  validate_market(params);
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const std::size_t n = profiles.size();
  if (n < 2) throw std::invalid_argument("probe requires N >= 2");

  const std::vector<double> a = reward_coefficients(profiles, params);
  const double mean_a =
      std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  const std::size_t weakest =
      std::min_element(a.begin(), a.end()) - a.begin();

  // Feasible heterogeneity direction in deviation coordinates: delta_i is
  // linear in w, so theta-scalings of a feasible direction stay feasible.
  std::vector<double> direction(n, 0.0);
  double margin = 0.0;
  for (std::size_t i = 0; i < n; ++i) margin += 1.0 - a[weakest] / a[i];
  if (margin > 2.05) {
    double neg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != weakest) neg += 1.0 / a[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double v = i == weakest ? -a[weakest] * neg : 1.0;
      direction[i] = v / a[i];
    }
  }
  double direction_max = 0.0;
  for (double w : direction) direction_max = std::max(direction_max, std::abs(w));

  Rng rng(seed);
  auto draw_region_point = [&](std::vector<double>& point) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double base = rng.uniform(0.3, 0.75) * params.price_cap;
      const double ybar = base / mean_a;
      double theta = 0.0;
      if (direction_max > 0.0) {
        theta = rng.uniform(0.0, 0.5 / direction_max);
      }
      bool ok = true;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double y = ybar * (1.0 + theta * direction[i]);
        point[i] = y * a[i];
        s += y;
        if (!(point[i] > kMinPrice) || !(point[i] <= params.price_cap)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const double threshold = s / ((static_cast<double>(n) - 1.0) *
                                    (static_cast<double>(n) - 1.0));
      for (std::size_t i = 0; i < n && ok; ++i) {
        if (!(point[i] / a[i] >= threshold)) ok = false;
      }
      if (!ok) continue;
      const RegimeCheck rc = regime_check(
          PriceSchedule::discriminatory(point), profiles, params);
      const double tol = 1e-9 * mean_a * static_cast<double>(n);
      for (double d : rc.delta) {
        if (d > tol) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
    return false;
  };

  ViProbeResult result;
  result.pairs_requested = samples;
  result.min_inner_product = std::numeric_limits<double>::infinity();
  std::vector<double> p1(n), p2(n);
  for (int k = 0; k < samples; ++k) {
    if (!draw_region_point(p1) || !draw_region_point(p2)) continue;
    bool distinct = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (p1[i] != p2[i]) {
        distinct = true;
        break;
      }
    }
    if (!distinct) continue;
    const auto g1 = profit_gradient(PriceSchedule::discriminatory(p1),
                                    profiles, params);
    const auto g2 = profit_gradient(PriceSchedule::discriminatory(p2),
                                    profiles, params);
    double inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // F = -grad, so (F(p1) - F(p2)) . (p1 - p2) = (g2 - g1) . (p1 - p2).
      inner += (g2[i] - g1[i]) * (p1[i] - p2[i]);
    }
    result.min_inner_product = std::min(result.min_inner_product, inner);
    ++result.pairs_found;
  }
  if (result.pairs_found == 0) result.min_inner_product = 0.0;
  return result;
}

}  // namespace stackedge
