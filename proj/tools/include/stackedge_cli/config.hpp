#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stackedge/experiments.hpp"
#include "stackedge/types.hpp"

namespace stackedge::cli {

// Flat `key = value` configuration with dotted namespaces and # comments.
// Values are scalars or comma-separated lists. Parsing reports the offending
// line and key in every diagnostic.

struct ConfigError {
  int line = 0;  // 0 when the problem is not tied to a source line
  std::string message;
};

struct VerifyOptions {
  std::int64_t trials = 1000000;
  std::int64_t min_trials = 100000;  // below this the race check is inconclusive
  int grid_points = 1000;
  int samples = 1000;
  double perturb = 0.0;  // relative demand perturbation before the deviation check
};

struct RunConfig {
  MarketParams market;
  ScenarioSpec scenario;
  SolverConfig solver;
  AscentOptions ascent;
  VerifyOptions verify;

  // Explicit instance for solve-mdg (optional).
  std::vector<double> block_sizes;
  PricingScheme scheme = PricingScheme::kUniform;
  std::vector<double> price_values;
  bool scheme_set = false;

  // Sweep parameters (optional; flags may override).
  std::optional<std::string> sweep_axis;
  std::vector<double> sweep_values;
};

// Parses configuration text. On failure returns the first error.
bool parse_config_text(const std::string& text, RunConfig& out,
                       ConfigError& error);
bool load_config_file(const std::string& path, RunConfig& out,
                      ConfigError& error);

// Serializes every field; parse_config_text(to_config_text(c)) reproduces c.
std::string to_config_text(const RunConfig& config);

// Semantic validation beyond per-key parsing (bounds, cross-field rules).
// Returns an empty string when valid, else a message naming the field.
std::string validate(const RunConfig& config);

std::vector<MinerProfile> profiles_from_config(const RunConfig& config);
PriceSchedule prices_from_config(const RunConfig& config, std::size_t n);

}  // namespace stackedge::cli
