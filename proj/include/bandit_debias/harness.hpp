#pragma once
// Replicated Monte Carlo experiments: simulate -> debias -> estimate, per
// replication and per evaluation horizon, then aggregate per cell.
//
// Seeding: cell i uses key cell_seed(master, i). Replication r simulates its
// real log on streams {*, real, r, 0}; its debias replays use
// {*, bootstrap, r, b}; TS propensities use {propensity, real, r, t}.
// Truncated horizons reuse the same streams, so T' = T reproduces the
// terminal numbers exactly.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandit_debias/bootstrap.hpp"
#include "bandit_debias/distributions.hpp"
#include "bandit_debias/errors.hpp"
#include "bandit_debias/estimators.hpp"
#include "bandit_debias/policies.hpp"

namespace bdb {

struct CellSpec {
  std::string name;
  PolicySpec policy;
  std::vector<RewardDistribution> arms;
  std::size_t T = 100;
  std::size_t replications = 1000;
  std::optional<BootstrapSpec> bootstrap = BootstrapSpec{};  // nullopt: no debiasing
  std::vector<Estimator> estimators{Estimator::Mean};
  std::vector<std::size_t> horizon_grid;  // increasing, within [K, T]; empty means {T}

  std::size_t K() const noexcept { return arms.size(); }
  /// The grid actually evaluated: horizon_grid with T appended if missing.
  std::vector<std::size_t> horizons() const;
  void validate() const;
};

struct ExperimentPlan {
  std::uint64_t master_seed = 0;
  std::vector<CellSpec> cells;
};

/// Parses a plan file object; throws ConfigError naming the offending field.
ExperimentPlan plan_from_json(const nlohmann::json& j);
CellSpec cell_from_json(const nlohmann::json& j, std::size_t index);

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t cell_index) noexcept;

/// One arm of one (replication, horizon) pipeline; NaN where not available.
struct ArmRecord {
  std::size_t count = 0;
  double raw_mean = 0.0;
  double estimated_bias = 0.0;
  double corrected_mean = 0.0;
  double ipw = 0.0;
  double aipw = 0.0;
};

struct ReplicationRecord {
  std::size_t replication = 0;
  std::size_t horizon = 0;
  std::vector<ArmRecord> arms;
  std::optional<ErrorKind> error;
  std::string message;
};

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double se = 0.0;  // sample sd / sqrt(n); 0 when n < 2
};

struct ArmAggregate {
  double true_mean = 0.0;
  Moments raw;        // sample mean
  double raw_bias = 0.0;
  Moments estimated_bias;
  Moments corrected;
  Moments ipw;
  Moments aipw;
};

struct MseRow {
  std::size_t horizon = 0;
  std::size_t arm = 0;
  std::string estimator;  // mean | mb | ipw | aipw
  double mse = 0.0;
  std::size_t n = 0;
};

struct CellResult {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t K = 0;
  std::size_t T = 0;
  std::size_t replications = 0;
  std::vector<ArmAggregate> arms;  // at the terminal horizon T
  std::vector<MseRow> mse;
  std::map<std::string, std::size_t> error_counts;
  std::vector<ReplicationRecord> records;  // replication-major, horizon-minor
};

/// Runs one cell. Parallel over replications; aggregates are reduced in
/// replication order, so the result is independent of `workers`.
CellResult run_cell(const CellSpec& cell, std::uint64_t seed, int workers = 1);

std::vector<CellResult> run_plan(const ExperimentPlan& plan, int workers = 1);

/// MSE of every estimator at every horizon, from a cell's records.
std::vector<MseRow> mse_curves(const CellSpec& cell, const std::vector<ReplicationRecord>& records);

/// Aggregates at one horizon.
std::vector<ArmAggregate> aggregate(const CellSpec& cell, const std::vector<ReplicationRecord>& records,
                                    std::size_t horizon);

nlohmann::json summary_json(const CellResult& result);
std::string replications_csv(const CellResult& result);
std::string mse_csv(const CellResult& result);

/// Writes <dir>/<cell>/{summary.json, replications.csv, mse.csv} atomically.
void write_cell(const CellResult& result, const std::filesystem::path& dir);

}  // namespace bdb
