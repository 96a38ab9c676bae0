#include "bandit_debias/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bandit_debias/errors.hpp"

namespace bdb {

std::optional<RoundTable> propensity_trace(const BanditLog& log, std::uint64_t seed,
                                           std::uint32_t replication) {
  if (!has_propensities(log.policy)) return std::nullopt;
  log.validate();
  RoundTable table{log.arms, log.horizon, std::vector<double>(log.arms * log.horizon)};
  PolicyState state(log.policy, log.arms);
  for (std::size_t t = 0; t < log.horizon; ++t) {
    const RngStream mc(seed, StreamId{Purpose::Propensity, log.world, replication,
                                      static_cast<std::uint32_t>(t + 1)});
    const auto e = *propensities(log.policy, state, mc);
    std::copy(e.begin(), e.end(), table.values.begin() + static_cast<std::ptrdiff_t>(t * log.arms));
    state.update(log.actions[t], log.rewards[t]);
  }
  return table;
}

RoundTable running_means(const BanditLog& log) {
  RoundTable table{log.arms, log.horizon, std::vector<double>(log.arms * log.horizon, 0.0)};
  std::vector<std::size_t> counts(log.arms, 0);
  std::vector<double> sums(log.arms, 0.0);
  for (std::size_t t = 0; t < log.horizon; ++t) {
    for (std::size_t k = 0; k < log.arms; ++k) {
      if (counts[k] > 0) table(t, k) = sums[k] / static_cast<double>(counts[k]);
    }
    ++counts[log.actions[t]];
    sums[log.actions[t]] += log.rewards[t];
  }
  return table;
}

namespace {

void check_shape(const BanditLog& log, const RoundTable& table, const char* what) {
  if (table.arms != log.arms || table.rounds != log.horizon ||
      table.values.size() != log.arms * log.horizon) {
    throw DataError(std::string(what) + " table does not match the log's K x T shape");
  }
}

double chosen_propensity(const BanditLog& log, const RoundTable& e, std::size_t t) {
  const double p = e(t, log.actions[t]);
  if (!(p > 0.0)) throw DivisionHazard(t + 1);
  return p;
}

}  // namespace

std::vector<double> ipw_estimate(const BanditLog& log, const RoundTable& propensities) {
  check_shape(log, propensities, "propensity");
  std::vector<double> out(log.arms, 0.0);
  for (std::size_t t = 0; t < log.horizon; ++t) {
    out[log.actions[t]] += log.rewards[t] / chosen_propensity(log, propensities, t);
  }
  for (auto& v : out) v /= static_cast<double>(log.horizon);
  return out;
}

std::vector<double> aipw_estimate(const BanditLog& log, const RoundTable& propensities,
                                  const RoundTable& plug_in_means) {
  check_shape(log, propensities, "propensity");
  check_shape(log, plug_in_means, "plug-in mean");
  std::vector<double> out(log.arms, 0.0);
  for (std::size_t t = 0; t < log.horizon; ++t) {
    const std::size_t a = log.actions[t];
    const double e = chosen_propensity(log, propensities, t);
    for (std::size_t k = 0; k < log.arms; ++k) out[k] += plug_in_means(t, k);
    out[a] += (log.rewards[t] - plug_in_means(t, a)) / e;
  }
  for (auto& v : out) v /= static_cast<double>(log.horizon);
  return out;
}

std::vector<Estimator> parse_estimators(const std::string& csv) {
  std::vector<Estimator> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "mean") {
      out.push_back(Estimator::Mean);
    } else if (item == "ipw") {
      out.push_back(Estimator::Ipw);
    } else if (item == "aipw") {
      out.push_back(Estimator::Aipw);
    } else {
      throw ConfigError("--estimators: unknown estimator \"" + item + "\" (expected mean, ipw, aipw)");
    }
  }
  if (out.empty()) throw ConfigError("--estimators: empty list");
  return out;
}

EstimateSet estimate(const BanditLog& log, std::uint64_t seed, std::uint32_t replication,
                     const std::vector<Estimator>& which) {
  log.validate();
  const auto wants = [&](Estimator e) { return std::find(which.begin(), which.end(), e) != which.end(); };
  EstimateSet set;
  const ArmSummary summary = summarize(log);
  set.arms.resize(log.arms);
  for (std::size_t k = 0; k < log.arms; ++k) {
    set.arms[k].count = summary.arms[k].count;
    set.arms[k].sample_mean = summary.arms[k].zero_count() ? std::numeric_limits<double>::quiet_NaN()
                                                           : summary.arms[k].mean;
  }
  if (!wants(Estimator::Ipw) && !wants(Estimator::Aipw)) return set;
  set.propensities = propensity_trace(log, seed, replication);
  if (!set.propensities) return set;
  if (wants(Estimator::Ipw)) {
    const auto ipw = ipw_estimate(log, *set.propensities);
    for (std::size_t k = 0; k < log.arms; ++k) set.arms[k].ipw = ipw[k];
  }
  if (wants(Estimator::Aipw)) {
    const auto aipw = aipw_estimate(log, *set.propensities, running_means(log));
    for (std::size_t k = 0; k < log.arms; ++k) set.arms[k].aipw = aipw[k];
  }
  return set;
}

nlohmann::json to_json(const EstimateSet& set, bool include_trace) {
  auto opt = [](const std::optional<double>& v) {
    return v && !std::isnan(*v) ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json arms = nlohmann::json::array();
  for (std::size_t k = 0; k < set.arms.size(); ++k) {
    const auto& a = set.arms[k];
    arms.push_back({{"arm", k + 1},
                    {"count", a.count},
                    {"sample_mean", opt(a.sample_mean)},
                    {"ipw", opt(a.ipw)},
                    {"aipw", opt(a.aipw)}});
  }
  nlohmann::json j{{"arms", std::move(arms)}, {"propensities_defined", set.propensities.has_value()}};
  if (include_trace && set.propensities) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t t = 0; t < set.propensities->rounds; ++t) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t k = 0; k < set.propensities->arms; ++k) row.push_back((*set.propensities)(t, k));
      rows.push_back(std::move(row));
    }
    j["propensity_trace"] = std::move(rows);
  }
  return j;
}

}  // namespace bdb
