#include "bandit_debias/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bandit_debias/debias.hpp"
#include "bandit_debias/io.hpp"
#include "bandit_debias/rng.hpp"
#include "bandit_debias/simulator.hpp"

namespace bdb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool wants(const CellSpec& cell, Estimator e) {
  return std::find(cell.estimators.begin(), cell.estimators.end(), e) != cell.estimators.end();
}

ReplicationRecord run_pipeline(const CellSpec& cell, const BanditLog& full, std::size_t horizon,
                               std::uint64_t seed, std::uint32_t rep) {
  ReplicationRecord rec;
  rec.replication = rep;
  rec.horizon = horizon;
  rec.arms.assign(cell.K(), ArmRecord{0, kNaN, kNaN, kNaN, kNaN, kNaN});
  const BanditLog log = horizon == full.horizon ? full : truncate(full, horizon);
  const ArmSummary summary = summarize(log);
  for (std::size_t k = 0; k < cell.K(); ++k) {
    rec.arms[k].count = summary.arms[k].count;
    if (!summary.arms[k].zero_count()) rec.arms[k].raw_mean = summary.arms[k].mean;
  }
  auto note = [&](const Error& e) {
    if (!rec.error) {
      rec.error = e.kind();
      rec.message = e.what();
    }
  };
  if (cell.bootstrap) {
    try {
      const auto report = debias(log, *cell.bootstrap, seed, DebiasOptions{rep, 1});
      for (std::size_t k = 0; k < cell.K(); ++k) {
        rec.arms[k].estimated_bias = report.arms[k].estimated_bias;
        rec.arms[k].corrected_mean = report.arms[k].corrected_mean;
      }
      report.require_defined();
    } catch (const Error& e) {
      note(e);
    }
  }
  if (wants(cell, Estimator::Ipw) || wants(cell, Estimator::Aipw)) {
    try {
      const auto est = estimate(log, seed, rep, cell.estimators);
      for (std::size_t k = 0; k < cell.K(); ++k) {
        if (est.arms[k].ipw) rec.arms[k].ipw = *est.arms[k].ipw;
        if (est.arms[k].aipw) rec.arms[k].aipw = *est.arms[k].aipw;
      }
    } catch (const Error& e) {
      note(e);
    }
  }
  return rec;
}

Moments moments(const std::vector<double>& xs) {
  Moments m;
  double sum = 0.0;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    ++m.n;
    sum += x;
  }
  if (m.n == 0) {
    m.mean = m.se = kNaN;
    return m;
  }
  m.mean = sum / static_cast<double>(m.n);
  if (m.n < 2) return m;
  double ss = 0.0;
  for (double x : xs) {
    if (!std::isnan(x)) ss += (x - m.mean) * (x - m.mean);
  }
  m.se = std::sqrt(ss / static_cast<double>(m.n - 1)) / std::sqrt(static_cast<double>(m.n));
  return m;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json num(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

nlohmann::json moments_json(const Moments& m) {
  return {{"n", m.n}, {"mean", num(m.mean)}, {"se", num(m.se)}};
}

}  // namespace

std::vector<std::size_t> CellSpec::horizons() const {
  std::vector<std::size_t> h = horizon_grid;
  if (h.empty() || h.back() != T) h.push_back(T);
  return h;
}

void CellSpec::validate() const {
  if (arms.empty()) throw ConfigError("cell " + name + ": arms must be non-empty");
  if (replications < 1) throw ConfigError("cell " + name + ": replications must be >= 1");
  if (replications > StreamId::kMaxReplication) {
    throw ConfigError("cell " + name + ": replications exceeds the stream budget");
  }
  validate_policy(policy, K(), T);
  if (bootstrap && bootstrap->replays < 1) throw ConfigError("cell " + name + ": bootstrap.B must be >= 1");
  for (std::size_t i = 0; i < horizon_grid.size(); ++i) {
    if (horizon_grid[i] < K() || horizon_grid[i] > T) {
      throw ConfigError("cell " + name + ": horizon_grid entries must lie in [K, T]");
    }
    if (i > 0 && horizon_grid[i] <= horizon_grid[i - 1]) {
      throw ConfigError("cell " + name + ": horizon_grid must be strictly increasing");
    }
  }
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      throw ConfigError("cell name \"" + name + "\" may only contain [A-Za-z0-9_.-]");
    }
  }
  if (name.empty() || name == "." || name == "..") throw ConfigError("cell name must be a plain directory name");
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t cell_index) noexcept {
  return mix64(master_seed ^ mix64(static_cast<std::uint64_t>(cell_index) + 0x5EEDull));
}

CellResult run_cell(const CellSpec& cell, std::uint64_t seed, int workers) {
  cell.validate();
  const auto horizons = cell.horizons();
  const std::size_t H = horizons.size();
  CellResult out;
  out.name = cell.name;
  out.seed = seed;
  out.K = cell.K();
  out.T = cell.T;
  out.replications = cell.replications;
  out.records.resize(cell.replications * H);

  const long long n = static_cast<long long>(cell.replications);
  workers = std::max(workers, 1);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (long long r = 0; r < n; ++r) {
    const auto rep = static_cast<std::uint32_t>(r);
    const BanditLog log = run_experiment(cell.K(), cell.T, cell.policy, cell.arms,
                                         ExperimentStreams::make(seed, World::Real, rep, 0));
    for (std::size_t h = 0; h < H; ++h) {
      out.records[static_cast<std::size_t>(r) * H + h] = run_pipeline(cell, log, horizons[h], seed, rep);
    }
  }
  for (const auto& rec : out.records) {
    if (rec.error) ++out.error_counts[to_string(*rec.error)];
  }
  out.arms = aggregate(cell, out.records, cell.T);
  out.mse = mse_curves(cell, out.records);
  return out;
}

std::vector<ArmAggregate> aggregate(const CellSpec& cell, const std::vector<ReplicationRecord>& records,
                                    std::size_t horizon) {
  std::vector<ArmAggregate> out(cell.K());
  for (std::size_t k = 0; k < cell.K(); ++k) {
    std::vector<double> raw, bias, corr, ipw, aipw;
    for (const auto& rec : records) {
      if (rec.horizon != horizon) continue;
      raw.push_back(rec.arms[k].raw_mean);
      bias.push_back(rec.arms[k].estimated_bias);
      corr.push_back(rec.arms[k].corrected_mean);
      ipw.push_back(rec.arms[k].ipw);
      aipw.push_back(rec.arms[k].aipw);
    }
    ArmAggregate& a = out[k];
    a.true_mean = cell.arms[k].mean();
    a.raw = moments(raw);
    a.raw_bias = a.raw.mean - a.true_mean;
    a.estimated_bias = moments(bias);
    a.corrected = moments(corr);
    a.ipw = moments(ipw);
    a.aipw = moments(aipw);
  }
  return out;
}

std::vector<MseRow> mse_curves(const CellSpec& cell, const std::vector<ReplicationRecord>& records) {
  std::vector<MseRow> rows;
  for (std::size_t horizon : cell.horizons()) {
    for (std::size_t k = 0; k < cell.K(); ++k) {
      const double mu = cell.arms[k].mean();
      auto add = [&](const char* name, double ArmRecord::*field) {
        MseRow row{horizon, k, name, 0.0, 0};
        double sum = 0.0;
        for (const auto& rec : records) {
          if (rec.horizon != horizon) continue;
          const double v = rec.arms[k].*field;
          if (std::isnan(v)) continue;
          sum += (v - mu) * (v - mu);
          ++row.n;
        }
        row.mse = row.n == 0 ? kNaN : sum / static_cast<double>(row.n);
        rows.push_back(row);
      };
      add("mean", &ArmRecord::raw_mean);
      if (cell.bootstrap) add("mb", &ArmRecord::corrected_mean);
      if (wants(cell, Estimator::Ipw) && has_propensities(cell.policy)) add("ipw", &ArmRecord::ipw);
      if (wants(cell, Estimator::Aipw) && has_propensities(cell.policy)) add("aipw", &ArmRecord::aipw);
    }
  }
  return rows;
}

std::vector<CellResult> run_plan(const ExperimentPlan& plan, int workers) {
  for (const auto& c : plan.cells) c.validate();
  std::vector<CellResult> out;
  out.reserve(plan.cells.size());
  for (std::size_t i = 0; i < plan.cells.size(); ++i) {
    out.push_back(run_cell(plan.cells[i], cell_seed(plan.master_seed, i), workers));
  }
  return out;
}

nlohmann::json summary_json(const CellResult& result) {
  nlohmann::json arms = nlohmann::json::array();
  for (std::size_t k = 0; k < result.arms.size(); ++k) {
    const auto& a = result.arms[k];
    arms.push_back({{"arm", k + 1},
                    {"true_mean", a.true_mean},
                    {"raw_mean", moments_json(a.raw)},
                    {"raw_bias", num(a.raw_bias)},
                    {"estimated_bias", moments_json(a.estimated_bias)},
                    {"corrected_mean", moments_json(a.corrected)},
                    {"ipw", moments_json(a.ipw)},
                    {"aipw", moments_json(a.aipw)}});
  }
  nlohmann::json mse = nlohmann::json::array();
  for (const auto& row : result.mse) {
    mse.push_back({{"T", row.horizon}, {"arm", row.arm + 1}, {"estimator", row.estimator},
                   {"mse", num(row.mse)}, {"n", row.n}});
  }
  return {{"cell", result.name},
          {"seed", result.seed},
          {"K", result.K},
          {"T", result.T},
          {"replications", result.replications},
          {"arms", std::move(arms)},
          {"mse", std::move(mse)},
          {"errors", result.error_counts}};
}

std::string replications_csv(const CellResult& result) {
  std::string out = "replication,T,arm,count,raw_mean,estimated_bias,corrected_mean,ipw,aipw,error\n";
  for (const auto& rec : result.records) {
    for (std::size_t k = 0; k < rec.arms.size(); ++k) {
      const auto& a = rec.arms[k];
      out += std::to_string(rec.replication) + ',' + std::to_string(rec.horizon) + ',' +
             std::to_string(k + 1) + ',' + std::to_string(a.count) + ',' + fmt(a.raw_mean) + ',' +
             fmt(a.estimated_bias) + ',' + fmt(a.corrected_mean) + ',' + fmt(a.ipw) + ',' +
             fmt(a.aipw) + ',' + (rec.error ? to_string(*rec.error) : "") + '\n';
    }
  }
  return out;
}

std::string mse_csv(const CellResult& result) {
  std::string out = "T,arm,estimator,mse,n\n";
  for (const auto& row : result.mse) {
    out += std::to_string(row.horizon) + ',' + std::to_string(row.arm + 1) + ',' + row.estimator +
           ',' + fmt(row.mse) + ',' + std::to_string(row.n) + '\n';
  }
  return out;
}

void write_cell(const CellResult& result, const std::filesystem::path& dir) {
  const auto cell_dir = dir / result.name;
  write_file_atomic(cell_dir / "summary.json", dump_json(summary_json(result)));
  write_file_atomic(cell_dir / "replications.csv", replications_csv(result));
  write_file_atomic(cell_dir / "mse.csv", mse_csv(result));
}

}  // namespace bdb
