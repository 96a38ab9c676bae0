#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bandit_debias/rng.hpp"

namespace bdb {

struct Gaussian {
  double mean = 0.0;
  double variance = 1.0;
};

struct Bernoulli {
  double p = 0.5;
};

/// Finite law on a strictly increasing support.
struct FiniteDiscrete {
  std::vector<double> support;
  std::vector<double> probs;
};

/// First and second derivative of the log-MGF at a point.
struct LogMgfDerivatives {
  double first = 0.0;
  double second = 0.0;
};

/// Immutable reward law. Construction validates the parameters and throws
/// ConfigError on violation.
class RewardDistribution {
 public:
  using Law = std::variant<Gaussian, Bernoulli, FiniteDiscrete>;

  RewardDistribution(Law law, std::optional<double> variance_proxy = std::nullopt);

  static RewardDistribution gaussian(double mean, double variance) { return {Gaussian{mean, variance}}; }
  static RewardDistribution bernoulli(double p) { return {Bernoulli{p}}; }
  static RewardDistribution finite(std::vector<double> support, std::vector<double> probs) {
    return {FiniteDiscrete{std::move(support), std::move(probs)}};
  }
  static RewardDistribution point_mass(double value) { return gaussian(value, 0.0); }

  const Law& law() const noexcept { return law_; }
  bool is_gaussian() const noexcept { return std::holds_alternative<Gaussian>(law_); }
  bool is_degenerate() const noexcept { return variance() == 0.0; }

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }

  /// Sub-Gaussian variance proxy a^2. Defaults to sigma^2 for Gaussian and the
  /// Hoeffding proxy (u - l)^2 / 4 for bounded laws.
  double variance_proxy() const noexcept { return variance_proxy_; }
  bool has_explicit_variance_proxy() const noexcept { return explicit_proxy_; }

  /// Support as (value, probability) atoms; empty for a non-degenerate Gaussian.
  std::vector<std::pair<double, double>> atoms() const;

  double sample(RngStream& rng) const noexcept;

  /// eta(h) = log E[exp(h X)].
  double log_mgf(double h) const noexcept;
  LogMgfDerivatives log_mgf_derivatives(double h) const noexcept;

  /// Open interval {eta'(h)} of attainable tilted means; empty (lo >= hi) for
  /// degenerate laws.
  std::pair<double, double> tilted_mean_range() const noexcept;

 private:
  Law law_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double variance_proxy_ = 0.0;
  bool explicit_proxy_ = false;
  std::vector<double> cumulative_;  // FiniteDiscrete sampling table
};

RewardDistribution distribution_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RewardDistribution& d);

}  // namespace bdb
