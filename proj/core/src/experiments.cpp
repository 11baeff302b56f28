#include "stackedge/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace stackedge {

namespace {

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

void format_real(std::string& out, double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  out += buffer;
}

ReplicationRecord run_replication(const ScenarioSpec& spec,
                                  PricingScheme scheme, int replication,
                                  const SolverConfig& stage2,
                                  const AscentOptions& ascent) {
  ReplicationRecord record;
  try {
    ScenarioSpec local = spec;
    local.seed = spec.seed + static_cast<std::uint64_t>(replication);
    const std::vector<MinerProfile> profiles = sample_profiles(local);

    if (scheme == PricingScheme::kUniform) {
      const UniformOptimum opt = optimize_uniform(profiles, spec.market,
                                                  stage2);
      record.prices.assign(profiles.size(), opt.price);
      record.mean_price = opt.price;
      record.profit = opt.profit;
      record.total_demand = opt.equilibrium.demands.total();
      record.demands = opt.equilibrium.demands.demands;
      record.stage2_converged = opt.equilibrium.converged;
      record.stage1_converged = true;
    } else {
      const DiscriminatoryOptimum opt =
          optimize_discriminatory(profiles, spec.market, ascent, stage2);
      record.prices = opt.prices.prices;
      record.mean_price = sample_mean(opt.prices.prices);
      const bool closed_form_valid =
          opt.equilibrium.interior && opt.equilibrium.converged;
      record.profit =
          closed_form_valid ? opt.profit : opt.equilibrium.esp_profit;
      record.total_demand = opt.equilibrium.demands.total();
      record.demands = opt.equilibrium.demands.demands;
      record.stage2_converged = opt.equilibrium.converged;
      record.stage1_converged = opt.converged;
    }
  } catch (const std::exception& e) {
    record.failed = true;
    record.error = e.what();
  }
  return record;
}

ScenarioResult aggregate(std::vector<ReplicationRecord> records) {
  ScenarioResult result;
  std::vector<double> profits, demands, prices;
  for (const auto& record : records) {
    if (record.failed) continue;
    profits.push_back(record.profit);
    demands.push_back(record.total_demand);
    prices.push_back(record.mean_price);
  }
  result.completed = static_cast<int>(profits.size());
  result.mean_profit = sample_mean(profits);
  result.sd_profit = sample_sd(profits, result.mean_profit);
  result.mean_total_demand = sample_mean(demands);
  result.sd_total_demand = sample_sd(demands, result.mean_total_demand);
  result.mean_price = sample_mean(prices);
  result.records = std::move(records);
  return result;
}

// Runs fn(0..count-1) across the thread budget. Each task writes only its
// own output slot, so results do not depend on scheduling.
void parallel_for(int count, const std::function<void(int)>& fn) {
  const int budget = std::max(1, std::min(thread_budget(), count));
  if (budget == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(budget);
  for (int w = 0; w < budget; ++w) {
    workers.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& worker : workers) worker.join();
}

}  // namespace

int thread_budget() {
  const char* env = std::getenv("STACKEDGE_THREADS");
  if (env != nullptr) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<int>(parsed);
    if (parsed < 0) return 1;
    // 0 falls through to auto.
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<MinerProfile> sample_profiles(int n_miners, double block_mean,
                                          double block_var, Rng& rng) {
  if (n_miners < 1) throw std::invalid_argument("scenario.n_miners: must be >= 1");
  if (block_var < 0.0) {
    throw std::invalid_argument("scenario.block_var: must be >= 0");
  }
  const double sd = std::sqrt(block_var);
  std::vector<MinerProfile> profiles(n_miners);
  for (int i = 0; i < n_miners; ++i) {
    double t = block_mean;
    if (sd > 0.0) {
      // Truncate below at 1 by redrawing: block sizes are positive.
      do {
        t = rng.normal(block_mean, sd);
      } while (t < 1.0);
    } else if (t < 1.0) {
      throw std::invalid_argument(
          "scenario.block_mean: must be >= 1 when block_var is 0");
    }
    profiles[i].id = i;
    profiles[i].block_size = t;
  }
  return profiles;
}

std::vector<MinerProfile> sample_profiles(const ScenarioSpec& spec) {
  Rng rng(spec.seed);
  return sample_profiles(spec.n_miners, spec.block_mean, spec.block_var, rng);
}

ScenarioResult run_scenario(const ScenarioSpec& spec, PricingScheme scheme,
                            const SolverConfig& stage2,
                            const AscentOptions& ascent) {
  if (spec.replications < 1) {
    throw std::invalid_argument("scenario.replications: must be >= 1");
  }
  validate_market(spec.market);
  std::vector<ReplicationRecord> records(spec.replications);
  parallel_for(spec.replications, [&](int rep) {
    records[rep] = run_replication(spec, scheme, rep, stage2, ascent);
  });
  return aggregate(std::move(records));
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNMiners: return "n_miners";
    case SweepAxis::kVariableRewardFactor: return "variable_reward_factor";
    case SweepAxis::kFixedReward: return "fixed_reward";
    case SweepAxis::kBlockMean: return "block_mean";
    case SweepAxis::kBlockVar: return "block_var";
  }
  return "unknown";
}

bool parse_axis(const std::string& text, SweepAxis& out) {
  if (text == "n_miners") out = SweepAxis::kNMiners;
  else if (text == "variable_reward_factor") out = SweepAxis::kVariableRewardFactor;
  else if (text == "fixed_reward") out = SweepAxis::kFixedReward;
  else if (text == "block_mean") out = SweepAxis::kBlockMean;
  else if (text == "block_var") out = SweepAxis::kBlockVar;
  else return false;
  return true;
}

ScenarioSpec apply_axis(const ScenarioSpec& base, SweepAxis axis,
                        double value) {
  ScenarioSpec spec = base;
  switch (axis) {
    case SweepAxis::kNMiners:
      spec.n_miners = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::kVariableRewardFactor:
      spec.market.variable_reward_factor = value;
      break;
    case SweepAxis::kFixedReward:
      spec.market.fixed_reward = value;
      break;
    case SweepAxis::kBlockMean:
      spec.block_mean = value;
      break;
    case SweepAxis::kBlockVar:
      spec.block_var = value;
      break;
  }
  return spec;
}

std::vector<SweepResult> sweep(const ScenarioSpec& base, PricingScheme scheme,
                               SweepAxis axis,
                               const std::vector<double>& values,
                               const SolverConfig& stage2,
                               const AscentOptions& ascent) {
  if (values.empty()) {
    throw std::invalid_argument("sweep.values: must not be empty");
  }
  const int reps = base.replications;
  const int count = static_cast<int>(values.size()) * reps;
  std::vector<std::vector<ReplicationRecord>> records(values.size());
  for (auto& row : records) row.resize(reps);

  parallel_for(count, [&](int task) {
    const int vi = task / reps;
    const int rep = task % reps;
    const ScenarioSpec spec = apply_axis(base, axis, values[vi]);
    records[vi][rep] = run_replication(spec, scheme, rep, stage2, ascent);
  });

  std::vector<SweepResult> rows(values.size());
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    const ScenarioResult agg = aggregate(std::move(records[vi]));
    SweepResult& row = rows[vi];
    row.axis = axis;
    row.scheme = scheme;
    row.value = values[vi];
    row.mean_total_demand = agg.mean_total_demand;
    row.sd_total_demand = agg.sd_total_demand;
    row.mean_profit = agg.mean_profit;
    row.sd_profit = agg.sd_profit;
    row.mean_price = agg.mean_price;
    row.replications = agg.completed;
  }
  return rows;
}

void normalize_sweep(std::vector<SweepResult>& rows) {
  double max_demand = 0.0;
  double max_profit = 0.0;
  for (const auto& row : rows) {
    max_demand = std::max(max_demand, row.mean_total_demand);
    max_profit = std::max(max_profit, row.mean_profit);
  }
  for (auto& row : rows) {
    if (max_demand > 0.0) {
      row.mean_total_demand /= max_demand;
      row.sd_total_demand /= max_demand;
    }
    if (max_profit > 0.0) {
      row.mean_profit /= max_profit;
      row.sd_profit /= max_profit;
    }
  }
}

void write_sweep_csv(const std::vector<SweepResult>& rows,
                     std::ostream& out) {
  std::string text =
      "axis,scheme,value,mean_total_demand,sd_total_demand,mean_profit,"
      "sd_profit,mean_price,replications\n";
  for (const auto& row : rows) {
    text += to_string(row.axis);
    text += ',';
    text += to_string(row.scheme);
    text += ',';
    format_real(text, row.value);
    text += ',';
    format_real(text, row.mean_total_demand);
    text += ',';
    format_real(text, row.sd_total_demand);
    text += ',';
    format_real(text, row.mean_profit);
    text += ',';
    format_real(text, row.sd_profit);
    text += ',';
    format_real(text, row.mean_price);
    text += ',';
    text += std::to_string(row.replications);
    text += '\n';
  }
  out << text;
}

std::string sweep_csv(std::vector<SweepResult> rows) {
  normalize_sweep(rows);
  std::ostringstream out;
  write_sweep_csv(rows, out);
  return out.str();
}

}  // namespace stackedge
