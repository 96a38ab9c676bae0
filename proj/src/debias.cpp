#include "bandit_debias/debias.hpp"

#include <cmath>
#include <limits>

#include "bandit_debias/errors.hpp"

namespace bdb {

double ArmDebias::mc_standard_error() const noexcept {
  if (b_effective == 0) return std::numeric_limits<double>::quiet_NaN();
  return bootstrap_sd / std::sqrt(static_cast<double>(b_effective));
}

bool DebiasReport::all_defined() const noexcept {
  for (const auto& a : arms) {
    if (!a.defined()) return false;
  }
  return true;
}

void DebiasReport::require_defined() const {
  for (std::size_t k = 0; k < arms.size(); ++k) {
    if (!arms[k].defined()) throw UndefinedBias(k);
  }
}

namespace {

// One replay, sums only. Reward accumulation order matches summarize().
void replay_means(const BanditLog& log, const BootstrapWorld& world, std::uint64_t seed,
                  std::uint32_t replication, std::size_t b, double* out) {
  const std::size_t k_arms = log.arms;
  std::vector<std::size_t> counts(k_arms, 0);
  std::vector<double> sums(k_arms, 0.0);
  auto streams = ExperimentStreams::make(seed, World::Bootstrap, replication,
                                         static_cast<std::uint32_t>(b));
  simulate(
      log.policy, k_arms, log.horizon,
      [&](std::size_t arm, RngStream& rng) { return world.sample(arm, rng); }, streams.reward,
      streams.policy, [&](std::size_t, std::size_t arm, double reward) {
        ++counts[arm];
        sums[arm] += reward;
      });
  for (std::size_t k = 0; k < k_arms; ++k) {
    out[k] = counts[k] == 0 ? std::numeric_limits<double>::quiet_NaN()
                            : sums[k] / static_cast<double>(counts[k]);
  }
}

// Ordered reduction over b shared by the kernel and the reference path.
DebiasReport assemble(const ArmSummary& summary, const BootstrapSpec& spec, std::uint64_t seed,
                      std::uint32_t replication, const std::vector<double>& means) {
  const std::size_t k_arms = summary.arms.size();
  DebiasReport report;
  report.spec = spec;
  report.seed = seed;
  report.replication = replication;
  report.arms.resize(k_arms);
  for (std::size_t k = 0; k < k_arms; ++k) {
    ArmDebias& a = report.arms[k];
    a.raw_mean = summary.arms[k].mean;
    a.count = summary.arms[k].count;
    double sum = 0.0;
    for (std::size_t b = 0; b < spec.replays; ++b) {
      const double v = means[b * k_arms + k];
      if (std::isnan(v)) {
        ++a.zero_pull_replays;
      } else {
        ++a.b_effective;
        sum += v;
      }
    }
    if (a.b_effective == 0) {
      a.error = UndefinedBias(k).what();
      a.estimated_bias = a.corrected_mean = a.bootstrap_mean = a.bootstrap_sd =
          std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    a.bootstrap_mean = sum / static_cast<double>(a.b_effective);
    double ss = 0.0;
    for (std::size_t b = 0; b < spec.replays; ++b) {
      const double v = means[b * k_arms + k];
      if (!std::isnan(v)) ss += (v - a.bootstrap_mean) * (v - a.bootstrap_mean);
    }
    a.bootstrap_sd = a.b_effective > 1 ? std::sqrt(ss / static_cast<double>(a.b_effective - 1)) : 0.0;
    a.estimated_bias = a.bootstrap_mean - a.raw_mean;
    a.corrected_mean = a.raw_mean - a.estimated_bias;
  }
  return report;
}

}  // namespace

std::vector<double> bootstrap_replay_means(const BanditLog& log, const BootstrapWorld& world,
                                           std::size_t replays, std::uint64_t seed,
                                           const DebiasOptions& options) {
  const std::size_t k_arms = log.arms;
  std::vector<double> means(replays * k_arms);
  const long long n = static_cast<long long>(replays);
  const int workers = options.workers < 1 ? 1 : options.workers;
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers) if (workers > 1)
  for (long long b = 0; b < n; ++b) {
    replay_means(log, world, seed, options.replication, static_cast<std::size_t>(b),
                 means.data() + static_cast<std::size_t>(b) * k_arms);
  }
  return means;
}

DebiasReport debias(const BanditLog& log, const BootstrapSpec& spec, std::uint64_t seed,
                    const DebiasOptions& options) {
  log.validate();
  validate_policy(log.policy, log.arms, log.horizon);
  const ArmSummary summary = summarize(log);
  const BootstrapWorld world = build_world(summary, log, spec);
  const auto means = bootstrap_replay_means(log, world, spec.replays, seed, options);
  return assemble(summary, spec, seed, options.replication, means);
}

nlohmann::json to_json(const DebiasReport& report) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  nlohmann::json arms = nlohmann::json::array();
  for (std::size_t k = 0; k < report.arms.size(); ++k) {
    const auto& a = report.arms[k];
    nlohmann::json j{{"arm", k + 1},
                     {"count", a.count},
                     {"raw_mean", a.raw_mean},
                     {"estimated_bias", num(a.estimated_bias)},
                     {"corrected_mean", num(a.corrected_mean)},
                     {"bootstrap_mean", num(a.bootstrap_mean)},
                     {"bootstrap_sd", num(a.bootstrap_sd)},
                     {"mc_standard_error", num(a.mc_standard_error())},
                     {"zero_pull_replays", a.zero_pull_replays},
                     {"B_effective", a.b_effective}};
    j["error"] = a.error ? nlohmann::json(*a.error) : nlohmann::json(nullptr);
    arms.push_back(std::move(j));
  }
  return {{"bootstrap", to_string(report.spec.kind)},
          {"B", report.spec.replays},
          {"seed", report.seed},
          {"arms", std::move(arms)}};
}

namespace reference {

DebiasReport debias_serial(const BanditLog& log, const BootstrapSpec& spec, std::uint64_t seed,
                           std::uint32_t replication) {
  log.validate();
  validate_policy(log.policy, log.arms, log.horizon);
  const ArmSummary summary = summarize(log);
  const BootstrapWorld world = build_world(summary, log, spec);
  const std::size_t k_arms = log.arms;
  std::vector<double> means(spec.replays * k_arms);
  for (std::size_t b = 0; b < spec.replays; ++b) {
    auto streams = ExperimentStreams::make(seed, World::Bootstrap, replication,
                                           static_cast<std::uint32_t>(b));
    BanditLog replay;
    replay.arms = k_arms;
    replay.horizon = log.horizon;
    replay.policy = log.policy;
    replay.world = World::Bootstrap;
    simulate(
        log.policy, k_arms, log.horizon,
        [&](std::size_t arm, RngStream& rng) { return world.sample(arm, rng); }, streams.reward,
        streams.policy, [&](std::size_t, std::size_t arm, double reward) {
          replay.actions.push_back(arm);
          replay.rewards.push_back(reward);
        });
    const ArmSummary s = summarize(replay);
    for (std::size_t k = 0; k < k_arms; ++k) {
      means[b * k_arms + k] =
          s.arms[k].count == 0 ? std::numeric_limits<double>::quiet_NaN() : s.arms[k].mean;
    }
  }
  return assemble(summary, spec, seed, replication, means);
}

}  // namespace reference

}  // namespace bdb
