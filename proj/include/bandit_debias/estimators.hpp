#pragma once
// Arm-mean estimators for adaptively collected logs.
//
//   IPW_k  = (1/T) sum_t 1{a_t = k} r_t / e_t(k)
//   AIPW_k = (1/T) sum_t [ m_t(k) + 1{a_t = k} (r_t - m_t(k)) / e_t(k) ]
//
// e_t(k) is the policy's conditional selection probability given rounds < t,
// m_t(k) the running mean of arm k over rounds < t (0 before its first pull).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandit_debias/simulator.hpp"

namespace bdb {

/// Row-major T x K matrix of per-round, per-arm values.
struct RoundTable {
  std::size_t arms = 0;
  std::size_t rounds = 0;
  std::vector<double> values;

  double operator()(std::size_t t, std::size_t k) const noexcept { return values[t * arms + k]; }
  double& operator()(std::size_t t, std::size_t k) noexcept { return values[t * arms + k]; }
};

/// Replays the log through the policy and records e_t(k). Thompson-sampling
/// Monte Carlo propensities (K > 2) at round t use stream
/// {propensity, log.world, replication, t} under `seed`. nullopt for
/// deterministic policies.
std::optional<RoundTable> propensity_trace(const BanditLog& log, std::uint64_t seed,
                                           std::uint32_t replication = 0);

/// m_t(k): mean of arm k over rounds < t, 0 before its first pull.
RoundTable running_means(const BanditLog& log);

/// Throws DivisionHazard (1-based round) if e_t(a_t) <= 0.
std::vector<double> ipw_estimate(const BanditLog& log, const RoundTable& propensities);
std::vector<double> aipw_estimate(const BanditLog& log, const RoundTable& propensities,
                                  const RoundTable& plug_in_means);

struct ArmEstimates {
  double sample_mean = 0.0;
  std::size_t count = 0;
  std::optional<double> ipw;
  std::optional<double> aipw;
};

struct EstimateSet {
  std::vector<ArmEstimates> arms;
  std::optional<RoundTable> propensities;
};

enum class Estimator { Mean, Ipw, Aipw };
std::vector<Estimator> parse_estimators(const std::string& csv);

/// Sample means always; IPW/AIPW when requested and the policy randomizes.
/// Zero-count arms get sample_mean NaN (count 0).
EstimateSet estimate(const BanditLog& log, std::uint64_t seed, std::uint32_t replication = 0,
                     const std::vector<Estimator>& which = {Estimator::Mean, Estimator::Ipw,
                                                            Estimator::Aipw});

nlohmann::json to_json(const EstimateSet& set, bool include_trace = false);

}  // namespace bdb
