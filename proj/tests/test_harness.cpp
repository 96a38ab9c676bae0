#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "bandit_debias/debias.hpp"
#include "bandit_debias/errors.hpp"
#include "bandit_debias/harness.hpp"
#include "bandit_debias/io.hpp"

using namespace bdb;

namespace {

CellSpec small_cell(PolicySpec policy) {
  CellSpec c;
  c.name = "small";
  c.policy = policy;
  c.arms = {RewardDistribution::gaussian(1.0, 1.0), RewardDistribution::gaussian(1.5, 1.0)};
  c.T = 40;
  c.replications = 30;
  c.bootstrap = BootstrapSpec{BootstrapKind::MultiplierGaussian, 50};
  c.estimators = {Estimator::Mean, Estimator::Ipw, Estimator::Aipw};
  return c;
}

}  // namespace

TEST_CASE("single replication of deterministic arms") {
  CellSpec c = small_cell(EtcSpec{5});
  c.arms = {RewardDistribution::point_mass(1.0), RewardDistribution::point_mass(1.5)};
  c.replications = 1;
  const auto r = run_cell(c, 3);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(r.arms[k].raw.se == 0.0);
    CHECK(r.arms[k].raw_bias == 0.0);
    CHECK(r.arms[k].estimated_bias.mean == 0.0);
  }
}

TEST_CASE("records match an independent pipeline run") {
  const CellSpec c = small_cell(TsSpec{});
  const std::uint64_t seed = 12;
  const auto r = run_cell(c, seed);
  const std::uint32_t rep = 7;
  const auto log = run_experiment(2, c.T, c.policy, c.arms, ExperimentStreams::make(seed, World::Real, rep, 0));
  const auto report = debias(log, *c.bootstrap, seed, DebiasOptions{rep, 1});
  const auto est = estimate(log, seed, rep);
  const auto& rec = r.records[rep];
  CHECK(rec.replication == rep);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(rec.arms[k].raw_mean == summarize(log).arms[k].mean);
    if (report.arms[k].defined()) CHECK(rec.arms[k].corrected_mean == report.arms[k].corrected_mean);
    CHECK(rec.arms[k].ipw == *est.arms[k].ipw);
    CHECK(rec.arms[k].aipw == *est.arms[k].aipw);
  }
}

TEST_CASE("aggregates are plain means with sd/sqrt(n) standard errors") {
  const CellSpec c = small_cell(EtcSpec{5});
  const auto r = run_cell(c, 5);
  double sum = 0.0, ss = 0.0;
  for (const auto& rec : r.records) sum += rec.arms[1].raw_mean;
  const double mean = sum / 30;
  for (const auto& rec : r.records) ss += (rec.arms[1].raw_mean - mean) * (rec.arms[1].raw_mean - mean);
  CHECK(r.arms[1].raw.mean == doctest::Approx(mean).epsilon(1e-14));
  CHECK(r.arms[1].raw.se == doctest::Approx(std::sqrt(ss / 29) / std::sqrt(30.0)).epsilon(1e-12));
  CHECK(r.arms[1].raw_bias == doctest::Approx(mean - 1.5).epsilon(1e-12));
}

TEST_CASE("terminal horizon in the grid reproduces the terminal numbers") {
  CellSpec plain = small_cell(EgSpec{0.1});
  CellSpec grid = plain;
  grid.horizon_grid = {10, 25, 40};
  const auto a = run_cell(plain, 8);
  const auto b = run_cell(grid, 8);
  REQUIRE(b.records.size() == 3 * a.records.size());
  for (std::size_t r = 0; r < a.records.size(); ++r) {
    const auto& x = a.records[r];
    const auto& y = b.records[r * 3 + 2];
    CHECK(y.horizon == 40);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(x.arms[k].corrected_mean == y.arms[k].corrected_mean);
      CHECK(x.arms[k].ipw == y.arms[k].ipw);
    }
  }
  for (const auto& row : a.mse) {
    bool matched = false;
    for (const auto& other : b.mse) {
      if (other.horizon == row.horizon && other.arm == row.arm && other.estimator == row.estimator) {
        CHECK(other.mse == row.mse);
        matched = true;
      }
    }
    CHECK(matched);
  }
}

TEST_CASE("truncated records use the truncated log") {
  CellSpec c = small_cell(UcbSpec{});
  c.horizon_grid = {12};
  const auto r = run_cell(c, 2);
  const auto log = run_experiment(2, c.T, c.policy, c.arms, ExperimentStreams::make(2, World::Real, 0, 0));
  const auto s = summarize(truncate(log, 12));
  CHECK(r.records[0].horizon == 12);
  CHECK(r.records[0].arms[0].count == s.arms[0].count);
  CHECK(r.records[0].arms[0].raw_mean == s.arms[0].mean);
}

TEST_CASE("MSE rows are computed against the true means") {
  const CellSpec c = small_cell(TsSpec{});
  const auto r = run_cell(c, 4);
  for (const auto& row : r.mse) {
    if (row.estimator != "ipw") continue;
    double ss = 0.0;
    for (const auto& rec : r.records) ss += std::pow(rec.arms[row.arm].ipw - c.arms[row.arm].mean(), 2);
    CHECK(row.mse == doctest::Approx(ss / 30).epsilon(1e-12));
    CHECK(row.n == 30);
  }
}

TEST_CASE("per-replication errors are counted, not fatal") {
  CellSpec c = small_cell(TsSpec{});
  c.T = 4;
  c.replications = 200;
  const auto r = run_cell(c, 1);
  REQUIRE(r.error_counts.count("zero_count_arm") == 1);
  std::size_t failed = 0;
  for (const auto& rec : r.records) failed += rec.error ? 1 : 0;
  CHECK(failed == r.error_counts.at("zero_count_arm"));
}

TEST_CASE("results are independent of worker count and reproducible") {
  const CellSpec c = small_cell(TsSpec{});
  const auto a = run_cell(c, 77, 1);
  const auto b = run_cell(c, 77, 4);
  const auto again = run_cell(c, 77, 1);
  CHECK(replications_csv(a) == replications_csv(b));
  CHECK(mse_csv(a) == mse_csv(b));
  CHECK(summary_json(a).dump() == summary_json(b).dump());
  CHECK(replications_csv(a) == replications_csv(again));
}

TEST_CASE("plan parsing and cell seeds") {
  const auto plan = plan_from_json(nlohmann::json::parse(R"({
    "master_seed": 5,
    "cells": [
      {"name": "a", "policy": {"name": "etc", "m": 5}, "T": 20, "replications": 3,
       "arms": [{"type": "bernoulli", "p": 0.3}, {"type": "bernoulli", "p": 0.6}],
       "bootstrap": {"kind": "efron", "B": 7}, "estimators": ["mean"], "horizon_grid": [10]},
      {"name": "b", "policy": {"name": "ts"}, "T": 20, "replications": 3, "bootstrap": null,
       "arms": [{"type": "normal", "mean": 0, "variance": 1}]}
    ]})"));
  REQUIRE(plan.cells.size() == 2);
  CHECK(plan.master_seed == 5);
  CHECK(plan.cells[0].bootstrap->kind == BootstrapKind::Efron);
  CHECK(plan.cells[0].horizons() == std::vector<std::size_t>{10, 20});
  CHECK_FALSE(plan.cells[1].bootstrap.has_value());
  CHECK(cell_seed(5, 0) != cell_seed(5, 1));
  CHECK(cell_seed(5, 0) == mix64(5 ^ mix64(0x5EED)));

  const auto results = run_plan(plan, 2);
  CHECK(results[0].seed == cell_seed(5, 0));
  CHECK(results[1].mse.size() == 1);

  auto bad = [](const char* text) { return plan_from_json(nlohmann::json::parse(text)); };
  CHECK_THROWS_AS(bad(R"({"cells": []})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"cells": [{"name": "x/y", "policy": {"name": "ucb"}, "T": 5,
                                      "arms": [{"type": "bernoulli", "p": 0.5}]}]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"cells": [{"policy": {"name": "ucb"}, "T": 5, "horizon_grid": [6],
                                      "arms": [{"type": "bernoulli", "p": 0.5}]}]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"cells": [{"name": "a", "policy": {"name": "ucb"}, "T": 5, "arms": [{"type": "bernoulli", "p": 0.5}]},
                                    {"name": "a", "policy": {"name": "ucb"}, "T": 5, "arms": [{"type": "bernoulli", "p": 0.5}]}]})"),
                  ConfigError);
}

TEST_CASE("cell output files") {
  const auto dir = std::filesystem::temp_directory_path() / "bdb_test_harness";
  std::filesystem::remove_all(dir);
  const auto r = run_cell(small_cell(EgSpec{0.2}), 6);
  write_cell(r, dir);
  for (const char* f : {"summary.json", "replications.csv", "mse.csv"}) {
    CHECK(std::filesystem::is_regular_file(dir / "small" / f));
  }
  const auto summary = read_json(dir / "small" / "summary.json");
  CHECK(summary["cell"] == "small");
  CHECK(summary["arms"].size() == 2);
  CHECK(read_file(dir / "small" / "mse.csv").rfind("T,arm,estimator,mse,n\n", 0) == 0);
  std::filesystem::remove_all(dir);
}
