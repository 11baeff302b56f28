#include "stackedge_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "stackedge/economics.hpp"
#include "stackedge/equilibrium.hpp"
#include "stackedge/experiments.hpp"
#include "stackedge/pricing_discriminatory.hpp"
#include "stackedge/pricing_uniform.hpp"
#include "stackedge/rng.hpp"
#include "stackedge_cli/json_out.hpp"

namespace stackedge::cli {

namespace {

int fail_invalid(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  return kExitInvalid;
}

int emit_json(const Json& j, const CommonFlags& flags) {
  const std::string text = j.dump(2) + "\n";
  if (!flags.out_path.empty()) {
    std::ofstream out(flags.out_path);
    if (!out) return fail_invalid("cannot write to " + flags.out_path);
    out << text;
    std::cout << flags.out_path << '\n';
  } else {
    std::cout << text;
  }
  return kExitOk;
}

struct CheckRow {
  std::string name;
  std::string status;  // PASS / FAIL / SKIP / INCONCLUSIVE
  std::string detail;
};

void print_table(const std::vector<CheckRow>& rows) {
  std::size_t width = 0;
  for (const auto& row : rows) width = std::max(width, row.name.size());
  for (const auto& row : rows) {
    std::string padded = row.name;
    padded.resize(width, ' ');
    std::cout << padded << "  [" << row.status << "]";
    if (!row.detail.empty()) std::cout << "  " << row.detail;
    std::cout << '\n';
  }
}

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

}  // namespace

int load_run_config(const CommonFlags& flags, RunConfig& config) {
  if (!flags.config_path.empty()) {
    ConfigError error;
    if (!load_config_file(flags.config_path, config, error)) {
      return fail_invalid(error.message);
    }
  }
  if (flags.seed.has_value()) {
    if (*flags.seed < 0) return fail_invalid("--seed: must be >= 0");
    config.scenario.seed = static_cast<std::uint64_t>(*flags.seed);
  }
  if (flags.replications.has_value()) {
    config.scenario.replications = *flags.replications;
  }
  config.ascent.verbose = flags.verbose;
  const std::string problem = validate(config);
  if (!problem.empty()) return fail_invalid(problem);
  return kExitOk;
}

int cmd_solve_mdg(const RunConfig& config, const CommonFlags& flags) {
  try {
    const std::vector<MinerProfile> profiles = profiles_from_config(config);
    const PriceSchedule prices =
        prices_from_config(config, profiles.size());
    validate_prices(prices, config.market, config.solver.min_price);

    const EquilibriumReport report =
        solve_mdg(profiles, prices, config.market, config.solver);

    Json j;
    j["command"] = "solve-mdg";
    j["scheme"] = to_string(prices.scheme);
    j["n_miners"] = profiles.size();
    std::vector<double> block_sizes(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      block_sizes[i] = profiles[i].block_size;
    }
    j["block_sizes"] = block_sizes;
    j["prices"] = prices.prices;
    j.update(equilibrium_json(report));
    if (profiles.size() >= 2) {
      const ConditionCheck check =
          prices.scheme == PricingScheme::kUniform
              ? check_uniqueness_uniform(profiles, config.market)
              : check_uniqueness_discriminatory(profiles, prices,
                                                config.market);
      j["condition"] = condition_json(check);
    }
    j["deviation"] = deviation_json(verify_nash(
        report.demands, prices, profiles, config.market,
        config.verify.grid_points));

    const int code = emit_json(j, flags);
    if (code != kExitOk) return code;
    return report.converged ? kExitOk : kExitNoConvergence;
  } catch (const std::exception& e) {
    return fail_invalid(e.what());
  }
}

int cmd_optimize(const RunConfig& config, const CommonFlags& flags,
                 PricingScheme scheme) {
  try {
    const std::vector<MinerProfile> profiles = profiles_from_config(config);
    if (profiles.size() < 2) {
      return fail_invalid("optimize requires at least two miners");
    }

    Json j;
    j["command"] = "optimize";
    j["scheme"] = to_string(scheme);
    j["n_miners"] = profiles.size();

    bool converged = false;
    if (scheme == PricingScheme::kUniform) {
      const UniformOptimum result =
          optimize_uniform(profiles, config.market, config.solver);
      j.update(uniform_optimum_json(result));
      converged = result.equilibrium.converged;
    } else {
      const DiscriminatoryOptimum result = optimize_discriminatory(
          profiles, config.market, config.ascent, config.solver);
      j.update(discriminatory_optimum_json(result));
      converged = result.converged && result.equilibrium.converged;
    }

    const int code = emit_json(j, flags);
    if (code != kExitOk) return code;
    return converged ? kExitOk : kExitNoConvergence;
  } catch (const std::exception& e) {
    return fail_invalid(e.what());
  }
}

int cmd_sweep(const RunConfig& config, const CommonFlags& flags,
              const std::string& axis_flag, const std::string& values_flag,
              const std::string& curve_flag) {
  try {
    std::string axis_name;
    if (!axis_flag.empty()) {
      axis_name = axis_flag;
    } else if (config.sweep_axis.has_value()) {
      axis_name = *config.sweep_axis;
    } else {
      return fail_invalid("sweep.axis: required (use --axis)");
    }
    SweepAxis axis;
    if (!parse_axis(axis_name, axis)) {
      return fail_invalid("sweep.axis: unknown axis '" + axis_name + "'");
    }

    std::vector<double> values = config.sweep_values;
    if (!values_flag.empty()) {
      values.clear();
      std::stringstream stream(values_flag);
      std::string item;
      while (std::getline(stream, item, ',')) {
        try {
          values.push_back(std::stod(item));
        } catch (...) {
          return fail_invalid("--values: cannot parse '" + item + "'");
        }
      }
    }
    if (values.empty()) {
      return fail_invalid("sweep.values: required (use --values)");
    }

    // Optional curve parameter: one output file per curve value.
    SweepAxis curve_axis = axis;
    std::vector<double> curve_values;
    if (!curve_flag.empty()) {
      const std::size_t eq = curve_flag.find('=');
      if (eq == std::string::npos) {
        return fail_invalid("--curve: expected <axis>=<v1,v2,...>");
      }
      const std::string curve_name = curve_flag.substr(0, eq);
      if (!parse_axis(curve_name, curve_axis)) {
        return fail_invalid("--curve: unknown axis '" + curve_name + "'");
      }
      std::stringstream stream(curve_flag.substr(eq + 1));
      std::string item;
      while (std::getline(stream, item, ',')) {
        try {
          curve_values.push_back(std::stod(item));
        } catch (...) {
          return fail_invalid("--curve: cannot parse '" + item + "'");
        }
      }
      if (curve_values.empty()) {
        return fail_invalid("--curve: no values given");
      }
    }

    const std::string base_path = flags.out_path.empty()
                                      ? "sweep_" + to_string(axis) + ".csv"
                                      : flags.out_path;

    auto run_one = [&](const ScenarioSpec& spec, const std::string& path) {
      std::vector<SweepResult> rows;
      for (PricingScheme scheme :
           {PricingScheme::kUniform, PricingScheme::kDiscriminatory}) {
        const auto part = sweep(spec, scheme, axis, values, config.solver,
                                config.ascent);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      // Interleave rows by axis value so paired schemes sit together.
      std::vector<SweepResult> ordered;
      ordered.reserve(rows.size());
      const std::size_t half = rows.size() / 2;
      for (std::size_t v = 0; v < half; ++v) {
        ordered.push_back(rows[v]);
        ordered.push_back(rows[half + v]);
      }
      std::ofstream out(path);
      if (!out) return fail_invalid("cannot write to " + path);
      out << sweep_csv(std::move(ordered));
      std::cout << path << '\n';
      return kExitOk;
    };

    if (curve_values.empty()) {
      return run_one(config.scenario, base_path);
    }
    for (double curve_value : curve_values) {
      const ScenarioSpec spec =
          apply_axis(config.scenario, curve_axis, curve_value);
      std::string path = base_path;
      const std::size_t dot = path.rfind('.');
      const std::string tag =
          "." + to_string(curve_axis) + "=" + fmt(curve_value);
      if (dot == std::string::npos) {
        path += tag;
      } else {
        path.insert(dot, tag);
      }
      const int code = run_one(spec, path);
      if (code != kExitOk) return code;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return fail_invalid(e.what());
  }
}

int cmd_verify(const RunConfig& config, const CommonFlags& /*flags*/) {
  try {
    const std::vector<MinerProfile> profiles = profiles_from_config(config);
    const std::size_t n = profiles.size();
    const PriceSchedule prices =
        config.price_values.empty()
            ? PriceSchedule::uniform(n, config.market.price_cap)
            : prices_from_config(config, n);
    validate_prices(prices, config.market, config.solver.min_price);

    std::vector<CheckRow> rows;
    bool failed = false;
    std::string first_failure;
    auto add = [&](const std::string& name, bool pass,
                   const std::string& detail) {
      rows.push_back({name, pass ? "PASS" : "FAIL", detail});
      if (!pass && !failed) {
        failed = true;
        first_failure = name;
      }
    };

    // 1. Deviation oracle on the solved equilibrium (optionally perturbed).
    EquilibriumReport eq =
        solve_mdg(profiles, prices, config.market, config.solver);
    DemandProfile x = eq.demands;
    if (config.verify.perturb != 0.0 && n > 0) {
      x.demands[0] = std::clamp(
          x.demands[0] * (1.0 + config.verify.perturb),
          config.market.demand_min, config.market.demand_max);
    }
    const DeviationReport deviation = verify_nash(
        x, prices, profiles, config.market, config.verify.grid_points);
    add("nash-deviation", deviation.max_relative_gain <= 1e-8,
        "max relative gain " + fmt(deviation.max_relative_gain));

    // 2. Closed form vs dynamics (interior instances only).
    if (n >= 2) {
      const ClosedFormResult closed =
          prices.scheme == PricingScheme::kUniform
              ? closed_form_uniform(profiles, prices[0], config.market)
              : closed_form_discriminatory(profiles, prices, config.market);
      if (closed.interior && eq.converged) {
        double rel = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          rel = std::max(rel, std::abs(closed.demands[i] - eq.demands[i]) /
                                  std::max(1e-300, std::abs(closed.demands[i])));
        }
        add("closed-form-agreement", rel < 1e-6, "sup rel diff " + fmt(rel));
      } else {
        rows.push_back({"closed-form-agreement", "SKIP",
                        closed.interior ? "dynamics did not converge"
                                        : "closed form non-interior"});
      }
    }

    // 3. Discriminatory gradient vs central finite differences.
    if (n >= 2) {
      Rng rng(config.scenario.seed + 17);
      double worst = 0.0;
      for (int trial = 0; trial < 50; ++trial) {
        const double base =
            rng.uniform(0.3, 0.9) * config.market.price_cap;
        std::vector<double> p(n);
        for (auto& v : p) {
          v = std::clamp(base * (1.0 + rng.uniform(-0.05, 0.05)),
                         config.solver.min_price, config.market.price_cap);
        }
        const PriceSchedule schedule = PriceSchedule::discriminatory(p);
        const auto grad =
            profit_gradient(schedule, profiles, config.market);
        for (std::size_t i = 0; i < n; ++i) {
          const double h = 1e-5 * std::max(1.0, p[i]);
          PriceSchedule hi = schedule, lo = schedule;
          hi.prices[i] = p[i] + h;
          lo.prices[i] = p[i] - h;
          const double fd =
              (profit_discriminatory(hi, profiles, config.market) -
               profit_discriminatory(lo, profiles, config.market)) /
              (2.0 * h);
          const double scale = std::max({1.0, std::abs(fd), std::abs(grad[i])});
          worst = std::max(worst, std::abs(grad[i] - fd) / scale);
        }
      }
      add("gradient-fd", worst < 1e-5, "worst rel err " + fmt(worst));

      // 4. Cost-term Hessian quadratic form is non-positive.
      Rng vr(config.scenario.seed + 29);
      double worst_form = -1e300;
      const PriceSchedule cap_prices =
          PriceSchedule::uniform(n, config.market.price_cap);
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(n);
        for (auto& value : v) value = vr.uniform(-1.0, 1.0);
        worst_form = std::max(
            worst_form, cost_term_quadratic_form(cap_prices, profiles,
                                                 config.market, v));
      }
      add("cost-hessian-nsd", worst_form <= 1e-10,
          "max quadratic form " + fmt(worst_form));
    }

    // 5. Standard-function properties on states inside the regularity
    //    region.
    if (n >= 2) {
      const auto a = reward_coefficients(profiles, config.market);
      double bound = 1e300;
      for (std::size_t i = 0; i < n; ++i) {
        bound = std::min(bound, a[i] / (4.0 * prices[i]));
      }
      const double hi = bound / static_cast<double>(n);
      if (hi <= config.market.demand_min) {
        rows.push_back({"standard-function", "SKIP",
                        "regularity region excludes the demand box"});
      } else {
        Rng rng(config.scenario.seed + 43);
        bool ok = true;
        for (int trial = 0; trial < config.verify.samples && ok; ++trial) {
          DemandProfile state;
          state.demands.resize(n);
          double largest = config.market.demand_min;
          for (auto& v : state.demands) {
            v = rng.uniform(config.market.demand_min, hi);
            largest = std::max(largest, v);
          }
          const double total = state.total();
          const double max_grow = hi / largest;
          for (std::size_t i = 0; i < n && ok; ++i) {
            const double opp = total - state[i];
            const double unconstrained =
                std::sqrt(a[i] * opp / prices[i]) - opp;
            if (!(unconstrained > 0.0)) ok = false;
            // Monotonicity in opponents; the grown state stays inside the
            // region.
            const double grow = rng.uniform(1.0, max_grow);
            double opp2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              if (j != i) opp2 += state[j] * grow;
            }
            const double unconstrained2 =
                std::sqrt(a[i] * opp2 / prices[i]) - opp2;
            if (unconstrained2 + 1e-12 < unconstrained) ok = false;
            // Scalability.
            const double k = rng.uniform(1.0 + 1e-6, 2.0);
            const double scaled =
                std::sqrt(a[i] * k * opp / prices[i]) - k * opp;
            if (!(k * unconstrained > scaled)) ok = false;
          }
        }
        add("standard-function", ok,
            std::to_string(config.verify.samples) + " sampled states");
      }
    }

    // 6. Monte Carlo race against the analytic win probabilities.
    if (config.verify.trials < config.verify.min_trials) {
      rows.push_back({"mining-race", "INCONCLUSIVE",
                      "trials " + std::to_string(config.verify.trials) +
                          " below minimum " +
                          std::to_string(config.verify.min_trials)});
    } else {
      const auto freq =
          simulate_mining_race(eq.demands, profiles, config.market,
                               config.verify.trials, config.scenario.seed);
      int outliers = 0;
      double worst_z = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double p =
            win_probability(eq.demands, i, profiles, config.market);
        const double sigma = std::sqrt(
            std::max(p * (1.0 - p), 1e-300) /
            static_cast<double>(config.verify.trials));
        const double z = std::abs(freq[i] - p) / sigma;
        worst_z = std::max(worst_z, z);
        if (z > 3.0) ++outliers;
      }
      // With many miners a handful of 3-sigma excursions is expected; a
      // correct model keeps them rare.
      const int allowed = std::max(
          1, static_cast<int>(std::ceil(0.01 * static_cast<double>(n))));
      add("mining-race", outliers <= allowed,
          std::to_string(outliers) + " outliers (allowed " +
              std::to_string(allowed) + "), worst z " + fmt(worst_z));
    }

    print_table(rows);
    if (failed) {
      std::cout << "failed: " << first_failure << '\n';
      return kExitVerifyFailed;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return fail_invalid(e.what());
  }
}

}  // namespace stackedge::cli
