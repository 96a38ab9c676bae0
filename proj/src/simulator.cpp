#include "bandit_debias/simulator.hpp"

#include <string>

#include "bandit_debias/errors.hpp"

namespace bdb {

void BanditLog::validate() const {
  if (arms < 1) throw DataError("log: K must be >= 1");
  if (actions.size() != horizon || rewards.size() != horizon) {
    throw DataError("log: T=" + std::to_string(horizon) + " but " +
                    std::to_string(actions.size()) + " actions and " +
                    std::to_string(rewards.size()) + " rewards");
  }
  for (std::size_t t = 0; t < horizon; ++t) {
    if (actions[t] >= arms) {
      throw DataError("log: action at t=" + std::to_string(t + 1) + " is outside [1, K]");
    }
  }
}

std::size_t ArmSummary::total_count() const noexcept {
  std::size_t n = 0;
  for (const auto& a : arms) n += a.count;
  return n;
}

void ArmSummary::require_all_pulled() const {
  for (std::size_t k = 0; k < arms.size(); ++k) {
    if (arms[k].zero_count()) throw ZeroCountArm(k);
  }
}

ArmSummary summarize(std::size_t arms, std::span<const std::size_t> actions,
                     std::span<const double> rewards) {
  ArmSummary out;
  out.arms.resize(arms);
  std::vector<double> sums(arms, 0.0);
  for (std::size_t t = 0; t < actions.size(); ++t) {
    ++out.arms[actions[t]].count;
    sums[actions[t]] += rewards[t];
  }
  for (std::size_t k = 0; k < arms; ++k) {
    if (out.arms[k].count > 0) out.arms[k].mean = sums[k] / static_cast<double>(out.arms[k].count);
  }
  // Two-pass variance around the final mean.
  std::vector<double> ss(arms, 0.0);
  for (std::size_t t = 0; t < actions.size(); ++t) {
    const double d = rewards[t] - out.arms[actions[t]].mean;
    ss[actions[t]] += d * d;
  }
  for (std::size_t k = 0; k < arms; ++k) {
    if (out.arms[k].count > 1) out.arms[k].variance = ss[k] / static_cast<double>(out.arms[k].count);
  }
  return out;
}

ArmSummary summarize(const BanditLog& log) { return summarize(log.arms, log.actions, log.rewards); }

BanditLog truncate(const BanditLog& log, std::size_t horizon) {
  if (horizon > log.horizon || horizon < 1) {
    throw ConfigError("truncation horizon must lie in [1, T]");
  }
  BanditLog out = log;
  out.horizon = horizon;
  out.actions.resize(horizon);
  out.rewards.resize(horizon);
  return out;
}

BanditLog run_experiment(std::size_t arms, std::size_t horizon, const PolicySpec& policy,
                         std::span<const RewardDistribution> laws, ExperimentStreams streams,
                         World world) {
  validate_policy(policy, arms, horizon);
  if (laws.size() != arms) {
    throw ConfigError("expected " + std::to_string(arms) + " arm distributions, got " +
                      std::to_string(laws.size()));
  }
  BanditLog log;
  log.arms = arms;
  log.horizon = horizon;
  log.policy = policy;
  log.world = world;
  log.actions.reserve(horizon);
  log.rewards.reserve(horizon);
  simulate(
      policy, arms, horizon,
      [&](std::size_t arm, RngStream& rng) { return laws[arm].sample(rng); }, streams.reward,
      streams.policy,
      [&](std::size_t, std::size_t arm, double reward) {
        log.actions.push_back(arm);
        log.rewards.push_back(reward);
      });
  return log;
}

BanditLog run_experiment(std::size_t arms, std::size_t horizon, const PolicySpec& policy,
                         std::span<const RewardDistribution> laws, std::uint64_t seed) {
  BanditLog log = run_experiment(arms, horizon, policy, laws,
                                 ExperimentStreams::make(seed, World::Real, 0, 0));
  log.seed = seed;
  return log;
}

}  // namespace bdb
