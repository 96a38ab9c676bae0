#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bandit_debias/distributions.hpp"
#include "bandit_debias/policies.hpp"
#include "bandit_debias/rng.hpp"

namespace bdb {

/// One bandit experiment. Arms are 0-based here; log files use 1-based arms.
struct BanditLog {
  std::size_t arms = 0;
  std::size_t horizon = 0;
  std::vector<std::size_t> actions;
  std::vector<double> rewards;
  PolicySpec policy;
  std::optional<std::uint64_t> seed;  // absent for externally collected logs
  World world = World::Real;

  /// Throws DataError unless lengths match the horizon and every action < arms.
  void validate() const;
};

struct ArmStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // MLE (divide by n); 0 when count <= 1
  bool zero_count() const noexcept { return count == 0; }
};

struct ArmSummary {
  std::vector<ArmStats> arms;

  std::size_t total_count() const noexcept;
  /// Throws ZeroCountArm naming the first unpulled arm.
  void require_all_pulled() const;
};

/// Per-arm count, mean and MLE variance, from an explicit action/reward pair.
ArmSummary summarize(std::size_t arms, std::span<const std::size_t> actions,
                     std::span<const double> rewards);
ArmSummary summarize(const BanditLog& log);

/// First `horizon` rounds of a log.
BanditLog truncate(const BanditLog& log, std::size_t horizon);

/// Core loop shared by the real world and the bootstrap world.
///
/// `draw(arm, reward_rng)` produces a reward; `sink(t, arm, reward)` observes
/// every round. Policy randomness and reward randomness use separate streams.
template <class Draw, class Sink>
void simulate(const PolicySpec& policy, std::size_t arms, std::size_t horizon, Draw&& draw,
              RngStream& reward_rng, RngStream& policy_rng, Sink&& sink) {
  PolicyState state(policy, arms);
  for (std::size_t t = 1; t <= horizon; ++t) {
    const std::size_t arm = select_arm(policy, state, policy_rng);
    const double reward = draw(arm, reward_rng);
    state.update(arm, reward);
    sink(t, arm, reward);
  }
}

/// Reward and policy streams of one experiment in a given world.
struct ExperimentStreams {
  RngStream reward;
  RngStream policy;

  static ExperimentStreams make(std::uint64_t key, World world, std::uint32_t replication,
                                std::uint32_t index) {
    return {RngStream(key, StreamId{Purpose::Reward, world, replication, index}),
            RngStream(key, StreamId{Purpose::Policy, world, replication, index})};
  }
};

/// Simulates one real-world experiment. The seed keys both streams
/// (replication 0); deterministic given the arguments. Throws ConfigError on
/// an invalid configuration before drawing anything.
BanditLog run_experiment(std::size_t arms, std::size_t horizon, const PolicySpec& policy,
                         std::span<const RewardDistribution> laws, std::uint64_t seed);

/// As above with explicit streams; used by the harness for replication r.
BanditLog run_experiment(std::size_t arms, std::size_t horizon, const PolicySpec& policy,
                         std::span<const RewardDistribution> laws, ExperimentStreams streams,
                         World world = World::Real);

}  // namespace bdb
