#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "stackedge/experiments.hpp"
#include "test_support.hpp"

using namespace stackedge;

TEST_SUITE("experiments") {

TEST_CASE("profile sampling: degenerate variance and determinism") {
  ScenarioSpec spec;
  spec.n_miners = 12;
  spec.block_var = 0.0;
  spec.block_mean = 200.0;
  const auto profiles = sample_profiles(spec);
  for (const auto& m : profiles) {
    CHECK(m.block_size == 200.0);
  }

  spec.block_var = 5.0;
  const auto a = sample_profiles(spec);
  const auto b = sample_profiles(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].block_size == b[i].block_size);
  }

  Rng rng(1);
  CHECK_THROWS_AS(sample_profiles(10, 200.0, -1.0, rng),
                  std::invalid_argument);
}

TEST_CASE("profile sampling: sample mean within the CLT band") {
  ScenarioSpec spec;
  spec.n_miners = 10000;
  spec.block_mean = 200.0;
  spec.block_var = 5.0;
  spec.seed = 20240601;
  const auto profiles = sample_profiles(spec);
  double mean = 0.0;
  for (const auto& m : profiles) mean += m.block_size;
  mean /= static_cast<double>(profiles.size());
  CHECK(std::abs(mean - 200.0) <= 3.0 * std::sqrt(5.0 / 10000.0));
}

TEST_CASE("profile sampling: truncation keeps block sizes above one") {
  Rng rng(9);
  const auto profiles = sample_profiles(500, 2.0, 25.0, rng);
  for (const auto& m : profiles) {
    CHECK(m.block_size >= 1.0);
  }
}

TEST_CASE("run_scenario: uniform pricing pins the cap every replication") {
  ScenarioSpec spec;
  spec.n_miners = 30;
  spec.replications = 5;
  spec.seed = 3;
  const ScenarioResult result =
      run_scenario(spec, PricingScheme::kUniform);
  CHECK(result.completed == 5);
  for (const auto& record : result.records) {
    REQUIRE_FALSE(record.failed);
    CHECK(record.mean_price == 100.0);
    CHECK(record.stage2_converged);
  }
  CHECK(result.mean_price == 100.0);
}

TEST_CASE("run_scenario: discriminatory dominates uniform per replication") {
  ScenarioSpec spec;
  spec.n_miners = 40;
  spec.replications = 5;
  spec.seed = 17;
  const ScenarioResult uniform = run_scenario(spec, PricingScheme::kUniform);
  const ScenarioResult disc =
      run_scenario(spec, PricingScheme::kDiscriminatory);
  REQUIRE(uniform.completed == 5);
  REQUIRE(disc.completed == 5);
  for (int rep = 0; rep < 5; ++rep) {
    const auto& u = uniform.records[rep];
    const auto& d = disc.records[rep];
    CHECK(d.profit >= u.profit - 1e-6 * std::abs(u.profit));
    CHECK(d.mean_price < 100.0);
  }
}

TEST_CASE("sweep: row shape, ordering, and common random numbers") {
  ScenarioSpec spec;
  spec.n_miners = 100;
  spec.replications = 3;
  spec.seed = 5;
  const std::vector<double> values{10.0, 20.0, 30.0};
  const auto rows = sweep(spec, PricingScheme::kUniform,
                          SweepAxis::kVariableRewardFactor, values);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rows[i].value == values[i]);
    CHECK(rows[i].replications == 3);
    CHECK(rows[i].scheme == PricingScheme::kUniform);
    CHECK(rows[i].axis == SweepAxis::kVariableRewardFactor);
  }
  // Reward factor raises every coefficient, so with shared seeds demand and
  // profit must increase along the axis.
  CHECK(rows[0].mean_total_demand < rows[1].mean_total_demand);
  CHECK(rows[1].mean_total_demand < rows[2].mean_total_demand);
  CHECK(rows[0].mean_profit < rows[1].mean_profit);
  CHECK(rows[1].mean_profit < rows[2].mean_profit);
}

TEST_CASE("apply_axis dispatches to the right field") {
  ScenarioSpec base;
  CHECK(apply_axis(base, SweepAxis::kNMiners, 42).n_miners == 42);
  CHECK(apply_axis(base, SweepAxis::kVariableRewardFactor, 33.0)
            .market.variable_reward_factor == 33.0);
  CHECK(apply_axis(base, SweepAxis::kFixedReward, 5e3).market.fixed_reward ==
        5e3);
  CHECK(apply_axis(base, SweepAxis::kBlockMean, 150.0).block_mean == 150.0);
  CHECK(apply_axis(base, SweepAxis::kBlockVar, 2.0).block_var == 2.0);
}

TEST_CASE("axis names round-trip") {
  for (SweepAxis axis :
       {SweepAxis::kNMiners, SweepAxis::kVariableRewardFactor,
        SweepAxis::kFixedReward, SweepAxis::kBlockMean, SweepAxis::kBlockVar}) {
    SweepAxis parsed;
    REQUIRE(parse_axis(to_string(axis), parsed));
    CHECK(parsed == axis);
  }
  SweepAxis unused;
  CHECK_FALSE(parse_axis("bogus", unused));
}

TEST_CASE("csv: header, normalization, and 12-digit values") {
  std::vector<SweepResult> rows(2);
  rows[0].axis = rows[1].axis = SweepAxis::kNMiners;
  rows[0].scheme = PricingScheme::kUniform;
  rows[1].scheme = PricingScheme::kDiscriminatory;
  rows[0].value = 20.0;
  rows[1].value = 20.0;
  rows[0].mean_total_demand = 50.0;
  rows[1].mean_total_demand = 100.0;
  rows[0].sd_total_demand = 5.0;
  rows[1].sd_total_demand = 10.0;
  rows[0].mean_profit = 1234.567890123456;
  rows[1].mean_profit = 2469.135780246912;
  rows[0].mean_price = 100.0;
  rows[1].mean_price = 99.5;
  rows[0].replications = rows[1].replications = 20;

  const std::string text = sweep_csv(rows);
  std::istringstream lines(text);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "axis,scheme,value,mean_total_demand,sd_total_demand,mean_profit,"
        "sd_profit,mean_price,replications");

  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  // Normalized by the max mean: the larger row maps to exactly 1.
  CHECK(first.find("n_miners,uniform,20,0.5,0.05,0.5,") == 0);
  CHECK(second.find("n_miners,discriminatory,20,1,0.1,1,") == 0);
  CHECK(second.find(",99.5,") != std::string::npos);
}

TEST_CASE("csv output is byte-identical across runs and thread budgets") {
  ScenarioSpec spec;
  spec.n_miners = 25;
  spec.replications = 4;
  spec.seed = 11;
  const std::vector<double> values{20.0, 40.0};

  const char* saved = std::getenv("STACKEDGE_THREADS");
  const std::string saved_value = saved == nullptr ? "" : saved;

  setenv("STACKEDGE_THREADS", "1", 1);
  const std::string serial = sweep_csv(
      sweep(spec, PricingScheme::kDiscriminatory, SweepAxis::kNMiners, values));
  setenv("STACKEDGE_THREADS", "4", 1);
  const std::string parallel = sweep_csv(
      sweep(spec, PricingScheme::kDiscriminatory, SweepAxis::kNMiners, values));
  const std::string parallel_again = sweep_csv(
      sweep(spec, PricingScheme::kDiscriminatory, SweepAxis::kNMiners, values));

  if (saved == nullptr) {
    unsetenv("STACKEDGE_THREADS");
  } else {
    setenv("STACKEDGE_THREADS", saved_value.c_str(), 1);
  }

  CHECK(serial == parallel);
  CHECK(parallel == parallel_again);
}

TEST_CASE("scheme profit gap shrinks with the block-size variance") {
  ScenarioSpec spec;
  spec.n_miners = 60;
  spec.replications = 8;
  spec.seed = 21;
  const std::vector<double> variances{5.0, 2.0, 0.5, 0.0};
  const auto uniform_rows = sweep(spec, PricingScheme::kUniform,
                                  SweepAxis::kBlockVar, variances);
  const auto disc_rows = sweep(spec, PricingScheme::kDiscriminatory,
                               SweepAxis::kBlockVar, variances);
  // Same seeds per replication across axis values, so the gap curve is a
  // paired comparison; it must shrink to zero as heterogeneity vanishes.
  double previous = 1e300;
  for (std::size_t i = 0; i < variances.size(); ++i) {
    const double gap =
        std::abs(uniform_rows[i].mean_profit - disc_rows[i].mean_profit);
    CHECK(gap <= previous + 1e-12);
    previous = gap;
  }
  const double final_gap = std::abs(uniform_rows.back().mean_profit -
                                    disc_rows.back().mean_profit);
  CHECK(final_gap <= 1e-9 * std::abs(uniform_rows.back().mean_profit));
}

TEST_CASE("sweep rejects an empty value list") {
  ScenarioSpec spec;
  CHECK_THROWS_AS(sweep(spec, PricingScheme::kUniform, SweepAxis::kNMiners, {}),
                  std::invalid_argument);
}

TEST_CASE("replication failures are recorded, not thrown") {
  ScenarioSpec spec;
  spec.n_miners = 1;  // optimize requires N >= 2, so every replication fails
  spec.replications = 3;
  const ScenarioResult result = run_scenario(spec, PricingScheme::kUniform);
  CHECK(result.completed == 0);
  for (const auto& record : result.records) {
    CHECK(record.failed);
    CHECK_FALSE(record.error.empty());
  }
}

}  // TEST_SUITE
