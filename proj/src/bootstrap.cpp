#include "bandit_debias/bootstrap.hpp"

#include <cmath>

#include "bandit_debias/errors.hpp"

namespace bdb {

BootstrapKind bootstrap_kind_from_string(const std::string& s) {
  if (s == "mb") return BootstrapKind::MultiplierGaussian;
  if (s == "efron" || s == "eb") return BootstrapKind::Efron;
  throw ConfigError("bootstrap: expected \"mb\" or \"efron\", got \"" + s + "\"");
}

std::string to_string(BootstrapKind kind) {
  return kind == BootstrapKind::MultiplierGaussian ? "mb" : "efron";
}

BootstrapWorld build_world(const ArmSummary& summary, const BanditLog& log,
                           const BootstrapSpec& spec) {
  if (spec.replays < 1) throw ConfigError("bootstrap: B must be >= 1");
  if (summary.arms.size() != log.arms) throw DataError("summary and log disagree on K");
  summary.require_all_pulled();

  BootstrapWorld w;
  w.kind_ = spec.kind;
  const std::size_t k_arms = summary.arms.size();
  w.means_.resize(k_arms);
  w.variances_.resize(k_arms);
  w.sds_.resize(k_arms);
  for (std::size_t k = 0; k < k_arms; ++k) {
    w.means_[k] = summary.arms[k].mean;
    w.variances_[k] = summary.arms[k].variance;
    w.sds_[k] = std::sqrt(summary.arms[k].variance);
  }
  if (spec.kind == BootstrapKind::Efron) {
    w.pools_.resize(k_arms);
    for (std::size_t t = 0; t < log.horizon; ++t) w.pools_[log.actions[t]].push_back(log.rewards[t]);
  }
  return w;
}

}  // namespace bdb
