#include "stackedge_cli/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace stackedge::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

bool parse_int(const std::string& text, long long& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtoll(t.c_str(), &end, 10);
  return end == t.c_str() + t.size();
}

bool parse_list(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    double v = 0.0;
    if (!parse_double(item, v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

using Setter = std::function<bool(const std::string&, RunConfig&)>;

struct KeyEntry {
  const char* key;
  Setter set;
};

Setter double_field(double* (*access)(RunConfig&)) {
  return [access](const std::string& value, RunConfig& config) {
    return parse_double(value, *access(config));
  };
}

Setter int_field(int* (*access)(RunConfig&)) {
  return [access](const std::string& value, RunConfig& config) {
    long long v = 0;
    if (!parse_int(value, v)) return false;
    *access(config) = static_cast<int>(v);
    return true;
  };
}

Setter int64_field(std::int64_t* (*access)(RunConfig&)) {
  return [access](const std::string& value, RunConfig& config) {
    long long v = 0;
    if (!parse_int(value, v)) return false;
    *access(config) = v;
    return true;
  };
}

const std::vector<KeyEntry>& registry() {
  static const std::vector<KeyEntry> entries = {
      {"market.fixed_reward",
       double_field(+[](RunConfig& c) { return &c.market.fixed_reward; })},
      {"market.variable_reward_factor",
       double_field(+[](RunConfig& c) { return &c.market.variable_reward_factor; })},
      {"market.poisson_rate",
       double_field(+[](RunConfig& c) { return &c.market.poisson_rate; })},
      {"market.delay_factor",
       double_field(+[](RunConfig& c) { return &c.market.delay_factor; })},
      {"market.electricity_cost",
       double_field(+[](RunConfig& c) { return &c.market.electricity_cost; })},
      {"market.mining_time",
       double_field(+[](RunConfig& c) { return &c.market.mining_time; })},
      {"market.demand_min",
       double_field(+[](RunConfig& c) { return &c.market.demand_min; })},
      {"market.demand_max",
       double_field(+[](RunConfig& c) { return &c.market.demand_max; })},
      {"market.price_cap",
       double_field(+[](RunConfig& c) { return &c.market.price_cap; })},
      {"scenario.n_miners",
       int_field(+[](RunConfig& c) { return &c.scenario.n_miners; })},
      {"scenario.block_mean",
       double_field(+[](RunConfig& c) { return &c.scenario.block_mean; })},
      {"scenario.block_var",
       double_field(+[](RunConfig& c) { return &c.scenario.block_var; })},
      {"scenario.seed",
       [](const std::string& value, RunConfig& config) {
         long long v = 0;
         if (!parse_int(value, v) || v < 0) return false;
         config.scenario.seed = static_cast<std::uint64_t>(v);
         return true;
       }},
      {"scenario.replications",
       int_field(+[](RunConfig& c) { return &c.scenario.replications; })},
      {"solver.tolerance",
       double_field(+[](RunConfig& c) { return &c.solver.tolerance; })},
      {"solver.max_iterations",
       int_field(+[](RunConfig& c) { return &c.solver.max_iterations; })},
      {"solver.damping",
       double_field(+[](RunConfig& c) { return &c.solver.damping; })},
      {"solver.min_price",
       [](const std::string& value, RunConfig& config) {
         double v = 0.0;
         if (!parse_double(value, v)) return false;
         config.solver.min_price = v;
         config.ascent.min_price = v;
         return true;
       }},
      {"ascent.tolerance",
       double_field(+[](RunConfig& c) { return &c.ascent.tolerance; })},
      {"ascent.max_steps",
       int_field(+[](RunConfig& c) { return &c.ascent.max_steps; })},
      {"ascent.initial_step",
       double_field(+[](RunConfig& c) { return &c.ascent.initial_step; })},
      {"verify.trials",
       int64_field(+[](RunConfig& c) { return &c.verify.trials; })},
      {"verify.min_trials",
       int64_field(+[](RunConfig& c) { return &c.verify.min_trials; })},
      {"verify.grid_points",
       int_field(+[](RunConfig& c) { return &c.verify.grid_points; })},
      {"verify.samples",
       int_field(+[](RunConfig& c) { return &c.verify.samples; })},
      {"verify.perturb",
       double_field(+[](RunConfig& c) { return &c.verify.perturb; })},
      {"miners.block_sizes",
       [](const std::string& value, RunConfig& config) {
         return parse_list(value, config.block_sizes);
       }},
      {"prices.scheme",
       [](const std::string& value, RunConfig& config) {
         if (!parse_scheme(trim(value), config.scheme)) return false;
         config.scheme_set = true;
         return true;
       }},
      {"prices.values",
       [](const std::string& value, RunConfig& config) {
         return parse_list(value, config.price_values);
       }},
      {"sweep.axis",
       [](const std::string& value, RunConfig& config) {
         SweepAxis axis;
         if (!parse_axis(trim(value), axis)) return false;
         config.sweep_axis = trim(value);
         return true;
       }},
      {"sweep.values",
       [](const std::string& value, RunConfig& config) {
         return parse_list(value, config.sweep_values);
       }},
  };
  return entries;
}

}  // namespace

bool parse_config_text(const std::string& text, RunConfig& out,
                       ConfigError& error) {
  std::stringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    const std::string content = trim(line);
    if (content.empty()) continue;

    const std::size_t eq = content.find('=');
    if (eq == std::string::npos) {
      error = {line_number, "line " + std::to_string(line_number) +
                                ": expected `key = value`"};
      return false;
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));

    bool known = false;
    for (const auto& entry : registry()) {
      if (key == entry.key) {
        known = true;
        if (!entry.set(value, out)) {
          error = {line_number, "line " + std::to_string(line_number) + ": " +
                                    key + ": cannot parse value '" + value +
                                    "'"};
          return false;
        }
        break;
      }
    }
    if (!known) {
      error = {line_number, "line " + std::to_string(line_number) +
                                ": unknown key '" + key + "'"};
      return false;
    }
  }
  return true;
}

bool load_config_file(const std::string& path, RunConfig& out,
                      ConfigError& error) {
  std::ifstream file(path);
  if (!file) {
    error = {0, "cannot open config file: " + path};
    return false;
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str(), out, error);
}

std::string to_config_text(const RunConfig& c) {
  std::string out;
  auto emit = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  emit("market.fixed_reward", format_double(c.market.fixed_reward));
  emit("market.variable_reward_factor",
       format_double(c.market.variable_reward_factor));
  emit("market.poisson_rate", format_double(c.market.poisson_rate));
  emit("market.delay_factor", format_double(c.market.delay_factor));
  emit("market.electricity_cost", format_double(c.market.electricity_cost));
  emit("market.mining_time", format_double(c.market.mining_time));
  emit("market.demand_min", format_double(c.market.demand_min));
  emit("market.demand_max", format_double(c.market.demand_max));
  emit("market.price_cap", format_double(c.market.price_cap));
  emit("scenario.n_miners", std::to_string(c.scenario.n_miners));
  emit("scenario.block_mean", format_double(c.scenario.block_mean));
  emit("scenario.block_var", format_double(c.scenario.block_var));
  emit("scenario.seed", std::to_string(c.scenario.seed));
  emit("scenario.replications", std::to_string(c.scenario.replications));
  emit("solver.tolerance", format_double(c.solver.tolerance));
  emit("solver.max_iterations", std::to_string(c.solver.max_iterations));
  emit("solver.damping", format_double(c.solver.damping));
  emit("solver.min_price", format_double(c.solver.min_price));
  emit("ascent.tolerance", format_double(c.ascent.tolerance));
  emit("ascent.max_steps", std::to_string(c.ascent.max_steps));
  emit("ascent.initial_step", format_double(c.ascent.initial_step));
  emit("verify.trials", std::to_string(c.verify.trials));
  emit("verify.min_trials", std::to_string(c.verify.min_trials));
  emit("verify.grid_points", std::to_string(c.verify.grid_points));
  emit("verify.samples", std::to_string(c.verify.samples));
  emit("verify.perturb", format_double(c.verify.perturb));
  if (c.scheme_set) emit("prices.scheme", to_string(c.scheme));
  if (!c.block_sizes.empty()) {
    emit("miners.block_sizes", format_list(c.block_sizes));
  }
  if (!c.price_values.empty()) {
    emit("prices.values", format_list(c.price_values));
  }
  if (c.sweep_axis.has_value()) emit("sweep.axis", *c.sweep_axis);
  if (!c.sweep_values.empty()) {
    emit("sweep.values", format_list(c.sweep_values));
  }
  return out;
}

std::string validate(const RunConfig& c) {
  try {
    validate_market(c.market);
  } catch (const std::exception& e) {
    return e.what();
  }
  if (c.scenario.n_miners < 1) return "scenario.n_miners: must be >= 1";
  if (c.scenario.replications < 1) {
    return "scenario.replications: must be >= 1";
  }
  if (c.scenario.block_var < 0.0) return "scenario.block_var: must be >= 0";
  if (!(c.scenario.block_mean >= 1.0)) {
    return "scenario.block_mean: must be >= 1";
  }
  if (!(c.solver.tolerance > 0.0)) return "solver.tolerance: must be > 0";
  if (c.solver.max_iterations < 1) {
    return "solver.max_iterations: must be >= 1";
  }
  if (!(c.solver.damping > 0.0 && c.solver.damping <= 1.0)) {
    return "solver.damping: must be in (0, 1]";
  }
  if (!(c.solver.min_price > 0.0)) return "solver.min_price: must be > 0";
  if (!(c.ascent.tolerance > 0.0)) return "ascent.tolerance: must be > 0";
  if (c.ascent.max_steps < 1) return "ascent.max_steps: must be >= 1";
  if (!(c.ascent.initial_step > 0.0)) {
    return "ascent.initial_step: must be > 0";
  }
  if (c.verify.trials < 1) return "verify.trials: must be >= 1";
  if (c.verify.grid_points < 2) return "verify.grid_points: must be >= 2";
  if (c.verify.samples < 1) return "verify.samples: must be >= 1";
  for (std::size_t i = 0; i < c.block_sizes.size(); ++i) {
    if (!(c.block_sizes[i] >= 1.0)) {
      return "miners.block_sizes[" + std::to_string(i) + "]: must be >= 1";
    }
  }
  for (std::size_t i = 0; i < c.price_values.size(); ++i) {
    if (!(c.price_values[i] > 0.0)) {
      return "prices.values[" + std::to_string(i) + "]: price must be > 0";
    }
    if (c.price_values[i] > c.market.price_cap) {
      return "prices.values[" + std::to_string(i) +
             "]: price above market.price_cap";
    }
  }
  return "";
}

std::vector<MinerProfile> profiles_from_config(const RunConfig& config) {
  if (!config.block_sizes.empty()) {
    std::vector<MinerProfile> profiles(config.block_sizes.size());
    for (std::size_t i = 0; i < config.block_sizes.size(); ++i) {
      profiles[i].id = static_cast<int>(i);
      profiles[i].block_size = config.block_sizes[i];
    }
    return profiles;
  }
  return sample_profiles(config.scenario);
}

PriceSchedule prices_from_config(const RunConfig& config, std::size_t n) {
  if (config.price_values.empty()) {
    throw std::invalid_argument("prices.values: required but not set");
  }
  if (config.price_values.size() == 1) {
    if (config.scheme == PricingScheme::kDiscriminatory) {
      return PriceSchedule::discriminatory(
          std::vector<double>(n, config.price_values[0]));
    }
    return PriceSchedule::uniform(n, config.price_values[0]);
  }
  if (config.price_values.size() != n) {
    throw std::invalid_argument(
        "prices.values: expected 1 or " + std::to_string(n) +
        " entries, got " + std::to_string(config.price_values.size()));
  }
  if (config.scheme == PricingScheme::kUniform) {
    for (double v : config.price_values) {
      if (v != config.price_values[0]) {
        throw std::invalid_argument(
            "prices.values: uniform scheme requires all entries equal");
      }
    }
    return PriceSchedule::uniform(n, config.price_values[0]);
  }
  return PriceSchedule::discriminatory(config.price_values);
}

}  // namespace stackedge::cli
