#pragma once
// Bootstrap-world reward laws P*_k built from one observed log.
//
// Gaussian multiplier bootstrap: each bootstrap reward is
//   z* = n^{-1/2} sum_i (z_i - mu_hat) w_i + mu_hat,  w_i iid N(0, 1),
// which is exactly N(mu_hat, sigma_hat^2) with the MLE variance. The world
// samples that Gaussian directly instead of materializing the weights.
//
// Efron's bootstrap resamples the arm's observed rewards uniformly with
// replacement, one independent resample per pull, so a replay can pull an arm
// more often than the real experiment did.

#include <cstddef>
#include <string>
#include <vector>

#include "bandit_debias/rng.hpp"
#include "bandit_debias/simulator.hpp"

namespace bdb {

enum class BootstrapKind { MultiplierGaussian, Efron };

struct BootstrapSpec {
  BootstrapKind kind = BootstrapKind::MultiplierGaussian;
  std::size_t replays = 1000;  // B
};

/// "mb" / "efron" (also accepts "eb"); throws ConfigError otherwise.
BootstrapKind bootstrap_kind_from_string(const std::string& s);
std::string to_string(BootstrapKind kind);

class BootstrapWorld {
 public:
  BootstrapKind kind() const noexcept { return kind_; }
  std::size_t arms() const noexcept { return means_.size(); }

  /// Mean of the bootstrap law of `arm` (the real-world sample mean).
  double mean(std::size_t arm) const noexcept { return means_[arm]; }
  /// Variance of the bootstrap law of `arm` (the MLE sample variance).
  double variance(std::size_t arm) const noexcept { return variances_[arm]; }
  /// Observed rewards of `arm` (Efron resampling pool).
  const std::vector<double>& pool(std::size_t arm) const noexcept { return pools_[arm]; }

  double sample(std::size_t arm, RngStream& rng) const noexcept {
    if (kind_ == BootstrapKind::MultiplierGaussian) {
      if (sds_[arm] == 0.0) return means_[arm];
      return means_[arm] + sds_[arm] * rng.normal();
    }
    const auto& p = pools_[arm];
    return p[rng.index(p.size())];
  }

 private:
  friend BootstrapWorld build_world(const ArmSummary&, const BanditLog&, const BootstrapSpec&);

  BootstrapKind kind_ = BootstrapKind::MultiplierGaussian;
  std::vector<double> means_;
  std::vector<double> variances_;
  std::vector<double> sds_;
  std::vector<std::vector<double>> pools_;
};

/// Throws ZeroCountArm for an arm the log never pulled.
BootstrapWorld build_world(const ArmSummary& summary, const BanditLog& log,
                           const BootstrapSpec& spec);

}  // namespace bdb
