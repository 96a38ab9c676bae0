#pragma once
// Bandit algorithms as resumable state machines.
//
// Arms are 0-based in memory and 1-based in files. Rounds are 1-based.
// Ties (ETC commit, UCB argmax, EG greedy arm) go to the lowest arm index.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bandit_debias/rng.hpp"

namespace bdb {

/// Explore-then-commit: arm ceil(t/m) for t <= mK, then the best exploration mean.
struct EtcSpec {
  int m = 10;
};

/// mu_hat_k + sqrt(log t / N_k); unpulled arms first, lowest index first.
struct UcbSpec {};

/// Gaussian-prior Thompson sampling with a known likelihood variance.
struct TsSpec {
  double prior_mean = 0.0;
  double prior_variance = 1.0;
  double likelihood_variance = 1.0;
};

/// Uniform arm with probability epsilon, greedy arm otherwise. Unpulled arms
/// count as greedy-best (lowest index first), as in UCB.
struct EgSpec {
  double epsilon = 0.05;
};

using PolicySpec = std::variant<EtcSpec, UcbSpec, TsSpec, EgSpec>;

std::string policy_name(const PolicySpec& spec);
/// True when the policy randomizes internally, i.e. propensities exist.
bool has_propensities(const PolicySpec& spec) noexcept;
/// Throws ConfigError for parameters that are invalid regardless of K and T.
void validate_policy(const PolicySpec& spec);
/// Throws ConfigError if the spec cannot run with K arms for T rounds.
void validate_policy(const PolicySpec& spec, std::size_t arms, std::size_t horizon);

PolicySpec policy_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PolicySpec& spec);

class PolicyState {
 public:
  PolicyState(const PolicySpec& spec, std::size_t arms);

  std::size_t arms() const noexcept { return counts_.size(); }
  /// Index of the round about to be played (1-based).
  std::size_t round() const noexcept { return round_; }
  std::size_t count(std::size_t arm) const noexcept { return counts_[arm]; }
  double sum(std::size_t arm) const noexcept { return sums_[arm]; }
  double sum_squares(std::size_t arm) const noexcept { return sum_squares_[arm]; }
  /// Running mean; 0 for an unpulled arm.
  double mean(std::size_t arm) const noexcept {
    return counts_[arm] == 0 ? 0.0 : sums_[arm] / static_cast<double>(counts_[arm]);
  }
  double posterior_mean(std::size_t arm) const noexcept { return post_mean_[arm]; }
  double posterior_variance(std::size_t arm) const noexcept { return post_var_[arm]; }
  std::optional<std::size_t> committed_arm() const noexcept { return committed_; }

  void update(std::size_t arm, double reward);

 private:
  PolicySpec spec_;
  std::size_t round_ = 1;
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;
  std::vector<double> sum_squares_;
  std::vector<double> post_mean_;
  std::vector<double> post_var_;
  std::optional<std::size_t> committed_;
};

std::size_t select_arm(const PolicySpec& spec, const PolicyState& state, RngStream& rng);

inline void update(PolicyState& state, std::size_t arm, double reward) {
  state.update(arm, reward);
}

/// Greedy arm for ETC/EG style argmax: unpulled arms first, then the highest
/// running mean, ties to the lowest index.
std::size_t greedy_arm(const PolicyState& state) noexcept;

/// Number of posterior draws used for Thompson-sampling propensities when K > 2.
inline constexpr std::size_t kTsPropensityDraws = 4096;

/// Conditional selection probabilities e_t(k) for every arm, or nullopt for
/// deterministic policies. `mc_stream` feeds the K > 2 Thompson-sampling
/// Monte Carlo and is ignored otherwise.
std::optional<std::vector<double>> propensities(const PolicySpec& spec, const PolicyState& state,
                                                RngStream mc_stream);

std::optional<double> propensity(const PolicySpec& spec, const PolicyState& state, std::size_t arm,
                                 RngStream mc_stream);

}  // namespace bdb
