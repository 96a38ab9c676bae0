#include "bandit_debias/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bandit_debias/errors.hpp"

namespace bdb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::size_t ucb_arm(const PolicyState& s) noexcept {
  for (std::size_t k = 0; k < s.arms(); ++k) {
    if (s.count(k) == 0) return k;
  }
  const double log_t = std::log(static_cast<double>(s.round()));
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.arms(); ++k) {
    const double index = s.mean(k) + std::sqrt(log_t / static_cast<double>(s.count(k)));
    if (index > best_index) {
      best_index = index;
      best = k;
    }
  }
  return best;
}

std::size_t ts_arm(const PolicyState& s, RngStream& rng) noexcept {
  std::size_t best = 0;
  double best_draw = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.arms(); ++k) {
    const double draw = s.posterior_mean(k) + std::sqrt(s.posterior_variance(k)) * rng.normal();
    if (draw > best_draw) {
      best_draw = draw;
      best = k;
    }
  }
  return best;
}

}  // namespace

std::string policy_name(const PolicySpec& spec) {
  return std::visit(Overloaded{[](const EtcSpec&) { return std::string("etc"); },
                               [](const UcbSpec&) { return std::string("ucb"); },
                               [](const TsSpec&) { return std::string("ts"); },
                               [](const EgSpec&) { return std::string("eg"); }},
                    spec);
}

bool has_propensities(const PolicySpec& spec) noexcept {
  return std::holds_alternative<TsSpec>(spec) || std::holds_alternative<EgSpec>(spec);
}

void validate_policy(const PolicySpec& spec) {
  std::visit(Overloaded{
                 [](const EtcSpec& e) {
                   if (e.m < 1) throw ConfigError("policy.m must be a positive integer");
                 },
                 [](const UcbSpec&) {},
                 [](const TsSpec& t) {
                   if (!(t.prior_variance > 0.0) || !(t.likelihood_variance > 0.0) ||
                       !std::isfinite(t.prior_mean)) {
                     throw ConfigError(
                         "policy: ts needs finite prior_mean and positive prior_variance, "
                         "likelihood_variance");
                   }
                 },
                 [](const EgSpec& g) {
                   if (!(g.epsilon >= 0.0 && g.epsilon <= 1.0)) {
                     throw ConfigError("policy.epsilon must lie in [0, 1]");
                   }
                 }},
             spec);
}

void validate_policy(const PolicySpec& spec, std::size_t arms, std::size_t horizon) {
  validate_policy(spec);
  if (arms < 1) throw ConfigError("K must be >= 1");
  if (horizon < 1) throw ConfigError("T must be >= 1");
  if (const auto* e = std::get_if<EtcSpec>(&spec)) {
    if (static_cast<std::size_t>(e->m) * arms > horizon) {
      throw ConfigError("etc requires m*K <= T (m=" + std::to_string(e->m) +
                        ", K=" + std::to_string(arms) + ", T=" + std::to_string(horizon) + ")");
    }
  }
}

PolicySpec policy_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string()) {
    throw ConfigError("policy: expected an object with a string field \"name\"");
  }
  const std::string name = j.at("name").get<std::string>();
  PolicySpec spec;
  try {
    if (name == "etc") {
      spec = EtcSpec{j.value("m", 10)};
    } else if (name == "ucb") {
      spec = UcbSpec{};
    } else if (name == "ts") {
      spec = TsSpec{j.value("prior_mean", 0.0), j.value("prior_variance", 1.0),
                    j.value("likelihood_variance", 1.0)};
    } else if (name == "eg") {
      spec = EgSpec{j.value("epsilon", 0.05)};
    } else {
      throw ConfigError("policy.name: unknown policy \"" + name + "\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("policy \"" + name + "\": " + e.what());
  }
  validate_policy(spec);
  return spec;
}

nlohmann::json to_json(const PolicySpec& spec) {
  return std::visit(
      Overloaded{[](const EtcSpec& e) { return nlohmann::json{{"name", "etc"}, {"m", e.m}}; },
                 [](const UcbSpec&) { return nlohmann::json{{"name", "ucb"}}; },
                 [](const TsSpec& t) {
                   return nlohmann::json{{"name", "ts"},
                                         {"prior_mean", t.prior_mean},
                                         {"prior_variance", t.prior_variance},
                                         {"likelihood_variance", t.likelihood_variance}};
                 },
                 [](const EgSpec& g) {
                   return nlohmann::json{{"name", "eg"}, {"epsilon", g.epsilon}};
                 }},
      spec);
}

PolicyState::PolicyState(const PolicySpec& spec, std::size_t arms)
    : spec_(spec),
      counts_(arms, 0),
      sums_(arms, 0.0),
      sum_squares_(arms, 0.0),
      post_mean_(arms, 0.0),
      post_var_(arms, 0.0) {
  if (const auto* t = std::get_if<TsSpec>(&spec_)) {
    std::fill(post_mean_.begin(), post_mean_.end(), t->prior_mean);
    std::fill(post_var_.begin(), post_var_.end(), t->prior_variance);
  }
}

void PolicyState::update(std::size_t arm, double reward) {
  ++counts_[arm];
  sums_[arm] += reward;
  sum_squares_[arm] += reward * reward;
  if (const auto* t = std::get_if<TsSpec>(&spec_)) {
    // Normal-normal conjugate update from the prior, not incrementally, so the
    // posterior depends only on (n, sum).
    const double precision =
        1.0 / t->prior_variance + static_cast<double>(counts_[arm]) / t->likelihood_variance;
    post_var_[arm] = 1.0 / precision;
    post_mean_[arm] =
        (t->prior_mean / t->prior_variance + sums_[arm] / t->likelihood_variance) / precision;
  }
  if (const auto* e = std::get_if<EtcSpec>(&spec_)) {
    if (round_ == static_cast<std::size_t>(e->m) * arms()) committed_ = greedy_arm(*this);
  }
  ++round_;
}

std::size_t greedy_arm(const PolicyState& state) noexcept {
  std::size_t best = 0;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < state.arms(); ++k) {
    if (state.count(k) == 0) return k;
    if (state.mean(k) > best_mean) {
      best_mean = state.mean(k);
      best = k;
    }
  }
  return best;
}

std::size_t select_arm(const PolicySpec& spec, const PolicyState& state, RngStream& rng) {
  return std::visit(
      Overloaded{[&](const EtcSpec& e) -> std::size_t {
                   const auto m = static_cast<std::size_t>(e.m);
                   if (state.round() <= m * state.arms()) return (state.round() - 1) / m;
                   return state.committed_arm().value_or(greedy_arm(state));
                 },
                 [&](const UcbSpec&) { return ucb_arm(state); },
                 [&](const TsSpec&) { return ts_arm(state, rng); },
                 [&](const EgSpec& g) -> std::size_t {
                   // One uniform decides explore/exploit; a second picks the arm.
                   if (rng.uniform() < g.epsilon) return rng.index(state.arms());
                   return greedy_arm(state);
                 }},
      spec);
}

std::optional<std::vector<double>> propensities(const PolicySpec& spec, const PolicyState& state,
                                                RngStream mc_stream) {
  const std::size_t k_arms = state.arms();
  if (const auto* g = std::get_if<EgSpec>(&spec)) {
    std::vector<double> e(k_arms, g->epsilon / static_cast<double>(k_arms));
    e[greedy_arm(state)] += 1.0 - g->epsilon;
    return e;
  }
  if (std::holds_alternative<TsSpec>(spec)) {
    if (k_arms == 1) return std::vector<double>{1.0};
    if (k_arms == 2) {
      const double diff = state.posterior_mean(0) - state.posterior_mean(1);
      const double scale = std::sqrt(state.posterior_variance(0) + state.posterior_variance(1));
      const double p0 = standard_normal_cdf(diff / scale);
      return std::vector<double>{p0, standard_normal_cdf(-diff / scale)};
    }
    std::vector<double> wins(k_arms, 0.0);
    for (std::size_t i = 0; i < kTsPropensityDraws; ++i) {
      wins[ts_arm(state, mc_stream)] += 1.0;
    }
    for (auto& w : wins) w /= static_cast<double>(kTsPropensityDraws);
    return wins;
  }
  return std::nullopt;
}

std::optional<double> propensity(const PolicySpec& spec, const PolicyState& state, std::size_t arm,
                                 RngStream mc_stream) {
  const auto all = propensities(spec, state, mc_stream);
  if (!all) return std::nullopt;
  return (*all)[arm];
}

}  // namespace bdb
