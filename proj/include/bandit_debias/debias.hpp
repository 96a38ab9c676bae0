#pragma once
// Bootstrap bias correction for adaptively collected bandit data.
//
// Given one log, replay B experiments in the bootstrap world with the same
// K, T and policy, then
//   estimated_bias_k = mean_b(mu*_{b,k}) - mu_hat_k
//   corrected_k      = mu_hat_k - estimated_bias_k
// Replays that never pull arm k are left out of arm k's average.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandit_debias/bootstrap.hpp"
#include "bandit_debias/simulator.hpp"

namespace bdb {

struct ArmDebias {
  double raw_mean = 0.0;
  std::size_t count = 0;
  double estimated_bias = 0.0;
  double corrected_mean = 0.0;
  double bootstrap_mean = 0.0;  // mean_b mu*_{b,k}
  double bootstrap_sd = 0.0;    // sd_b mu*_{b,k}; estimated_bias has MC SE sd/sqrt(B_eff)
  std::size_t zero_pull_replays = 0;
  std::size_t b_effective = 0;
  std::optional<std::string> error;  // set when b_effective == 0

  bool defined() const noexcept { return !error.has_value(); }
  double mc_standard_error() const noexcept;
};

struct DebiasReport {
  BootstrapSpec spec;
  std::uint64_t seed = 0;
  std::uint32_t replication = 0;
  std::vector<ArmDebias> arms;

  bool all_defined() const noexcept;
  /// Throws UndefinedBias for the first arm with B_effective = 0.
  void require_defined() const;
};

/// Where the replay streams come from. Replay b of replication r uses the
/// bootstrap-world streams {reward|policy, bootstrap, r, b} under `seed`.
struct DebiasOptions {
  std::uint32_t replication = 0;
  int workers = 1;
};

/// Parallel kernel: replays accumulate per-arm sums only, and replay means are
/// reduced in order of b, so the result does not depend on `workers`.
/// Throws ZeroCountArm if the log leaves an arm unpulled.
DebiasReport debias(const BanditLog& log, const BootstrapSpec& spec, std::uint64_t seed,
                    const DebiasOptions& options = {});

/// Per-replay bootstrap means mu*_{b,k} (NaN where arm k was not pulled),
/// row-major B x K. Exposed for diagnostics and tests.
std::vector<double> bootstrap_replay_means(const BanditLog& log, const BootstrapWorld& world,
                                           std::size_t replays, std::uint64_t seed,
                                           const DebiasOptions& options = {});

nlohmann::json to_json(const DebiasReport& report);

namespace reference {

/// Serial reference: materializes every replay as a BanditLog and summarizes
/// it. Bit-identical to bdb::debias.
DebiasReport debias_serial(const BanditLog& log, const BootstrapSpec& spec, std::uint64_t seed,
                           std::uint32_t replication = 0);

}  // namespace reference

}  // namespace bdb
