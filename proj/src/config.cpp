#include "bandit_debias/config.hpp"

#include <string>

#include "bandit_debias/errors.hpp"
#include "bandit_debias/harness.hpp"
#include "bandit_debias/theory.hpp"

namespace bdb {

namespace {

template <class T>
T field(const nlohmann::json& j, const std::string& path, const char* name) {
  if (!j.contains(name)) throw ConfigError(path + "." + name + ": missing");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + "." + name + ": wrong type");
  }
}

template <class T>
T field_or(const nlohmann::json& j, const std::string& path, const char* name, T fallback) {
  return j.contains(name) ? field<T>(j, path, name) : fallback;
}

std::size_t positive(const nlohmann::json& j, const std::string& path, const char* name) {
  const auto v = field<long long>(j, path, name);
  if (v < 1) throw ConfigError(path + "." + name + ": must be a positive integer");
  return static_cast<std::size_t>(v);
}

EtcGaussianParams gaussian_params(const nlohmann::json& j, const std::string& path) {
  EtcGaussianParams p{field<double>(j, path, "mu1"),  field<double>(j, path, "mu2"),
                      field<double>(j, path, "var1"), field<double>(j, path, "var2"),
                      static_cast<int>(positive(j, path, "m")), positive(j, path, "T")};
  p.validate();
  return p;
}

std::vector<int> m_grid(const nlohmann::json& j, const std::string& path) {
  const auto grid = field<std::vector<int>>(j, path, "m_grid");
  if (grid.empty()) throw ConfigError(path + ".m_grid: must be non-empty");
  for (int m : grid) {
    if (m < 1) throw ConfigError(path + ".m_grid: entries must be positive");
  }
  return grid;
}

}  // namespace

std::vector<RewardDistribution> arms_from_json(const nlohmann::json& j) {
  const nlohmann::json& list = j.is_object() && j.contains("arms") ? j.at("arms") : j;
  if (!list.is_array() || list.empty()) throw ConfigError("arms: expected a non-empty array");
  std::vector<RewardDistribution> out;
  for (const auto& d : list) out.push_back(distribution_from_json(d));
  return out;
}

CellSpec cell_from_json(const nlohmann::json& j, std::size_t index) {
  const std::string path = "cells[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  CellSpec c;
  c.name = field_or<std::string>(j, path, "name", "cell" + std::to_string(index));
  if (!j.contains("policy")) throw ConfigError(path + ".policy: missing");
  c.policy = policy_from_json(j.at("policy"));
  if (!j.contains("arms")) throw ConfigError(path + ".arms: missing");
  c.arms = arms_from_json(j.at("arms"));
  if (j.contains("K") && positive(j, path, "K") != c.arms.size()) {
    throw ConfigError(path + ".K: does not match the number of arms");
  }
  c.T = positive(j, path, "T");
  c.replications = field_or<std::size_t>(j, path, "replications", 1000);
  if (j.contains("bootstrap") && j.at("bootstrap").is_null()) {
    c.bootstrap.reset();
  } else if (j.contains("bootstrap")) {
    const auto& b = j.at("bootstrap");
    BootstrapSpec spec;
    spec.kind = bootstrap_kind_from_string(field_or<std::string>(b, path + ".bootstrap", "kind", "mb"));
    spec.replays = positive(b, path + ".bootstrap", "B");
    c.bootstrap = spec;
  }
  if (j.contains("estimators")) {
    std::string csv;
    for (const auto& e : field<std::vector<std::string>>(j, path, "estimators")) {
      csv += (csv.empty() ? "" : ",") + e;
    }
    c.estimators = parse_estimators(csv);
  }
  c.horizon_grid = field_or<std::vector<std::size_t>>(j, path, "horizon_grid", {});
  c.validate();
  return c;
}

ExperimentPlan plan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("plan: expected a JSON object");
  ExperimentPlan plan;
  plan.master_seed = field_or<std::uint64_t>(j, "plan", "master_seed", 0);
  if (!j.contains("cells") || !j.at("cells").is_array() || j.at("cells").empty()) {
    throw ConfigError("plan.cells: expected a non-empty array");
  }
  const auto& cells = j.at("cells");
  for (std::size_t i = 0; i < cells.size(); ++i) plan.cells.push_back(cell_from_json(cells[i], i));
  for (std::size_t i = 0; i < plan.cells.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (plan.cells[i].name == plan.cells[k].name) {
        throw ConfigError("plan.cells: duplicate cell name \"" + plan.cells[i].name + "\"");
      }
    }
  }
  return plan;
}

nlohmann::json run_theory(const nlohmann::json& config, std::uint64_t seed, int workers) {
  if (!config.is_object()) throw ConfigError("theory config: expected a JSON object");
  nlohmann::json out = nlohmann::json::object();
  bool any = false;

  if (config.contains("etc_gaussian")) {
    any = true;
    const auto p = gaussian_params(config.at("etc_gaussian"), "etc_gaussian");
    nlohmann::json r{{"bias", {etc_bias_gaussian(p, 0), etc_bias_gaussian(p, 1)}}};
    if (p.T > 2 * static_cast<std::size_t>(p.m)) r["g"] = {log_bias_g(p, 0), log_bias_g(p, 1)};
    out["etc_gaussian"] = std::move(r);
  }

  if (config.contains("etc_general")) {
    any = true;
    const auto& j = config.at("etc_general");
    const auto arms = arms_from_json(j);
    if (arms.size() != 2) throw ConfigError("etc_general.arms: expected two arms");
    const int m = static_cast<int>(positive(j, "etc_general", "m"));
    const std::size_t T = positive(j, "etc_general", "T");
    nlohmann::json r;
    try {
      r["bias"] = {etc_bias_general(arms[0], arms[1], m, T, 0),
                   etc_bias_general(arms[0], arms[1], m, T, 1)};
    } catch (const EnumerationCapExceeded& e) {
      r["bias"] = nullptr;
      r["error"] = e.what();
    }
    if (j.contains("mc_replications")) {
      const std::size_t reps = positive(j, "etc_general", "mc_replications");
      nlohmann::json mc = nlohmann::json::array();
      for (std::size_t k = 0; k < 2; ++k) {
        const auto est = etc_bias_monte_carlo(arms[0], arms[1], m, T, k, reps, seed, workers);
        mc.push_back({{"value", est.value}, {"standard_error", est.standard_error}});
      }
      r["monte_carlo"] = std::move(mc);
    }
    out["etc_general"] = std::move(r);
  }

  if (config.contains("ld_profile")) {
    any = true;
    const auto& j = config.at("ld_profile");
    const auto d = distribution_from_json(field<nlohmann::json>(j, "ld_profile", "distribution"));
    const double mu2 = field<double>(j, "ld_profile", "threshold");
    const auto profile = bahadur_rao_constants(d, mu2);
    nlohmann::json r{{"profile", to_json(profile)}};
    if (j.contains("m_grid")) {
      const int ratio = field_or<int>(j, "ld_profile", "T_ratio", 4);
      nlohmann::json rows = nlohmann::json::array();
      for (int m : m_grid(j, "ld_profile")) {
        const std::size_t T = static_cast<std::size_t>(ratio) * static_cast<std::size_t>(m);
        nlohmann::json row{{"m", m},
                           {"T", T},
                           {"on_mean_lattice", profile.threshold_on_mean_lattice(m)},
                           {"asymptotic_tail", bahadur_rao_tail(profile, m)},
                           {"prop2_bias", prop2_bias_asymptotic(d, mu2, m, T)}};
        if (!d.is_gaussian()) {
          const double tail = exact_tail_probability(d, mu2, m);
          row["exact_tail"] = tail;
          row["tail_ratio"] = tail / bahadur_rao_tail(profile, m);
          row["lemma2_product"] = lemma2_scale(profile, m) * exact_tail_expectation(d, mu2, m);
          row["exact_bias"] = etc_bias_general(d, RewardDistribution::point_mass(mu2), m, T, 0);
        }
        rows.push_back(std::move(row));
      }
      r["grid"] = std::move(rows);
    }
    out["ld_profile"] = std::move(r);
  }

  if (config.contains("thm1")) {
    any = true;
    const auto& j = config.at("thm1");
    const auto p = gaussian_params(field<nlohmann::json>(j, "thm1", "params"), "thm1.params");
    const auto grid = m_grid(j, "thm1");
    const auto rows = thm1_ratio_experiment(p, grid, positive(j, "thm1", "replications"), seed, workers);
    nlohmann::json r = nlohmann::json::array();
    for (const auto& row : rows) {
      r.push_back({{"m", row.m},
                   {"T", row.T},
                   {"excluded", row.excluded},
                   {"ratio", {to_json(row.ratio_summary[0]), to_json(row.ratio_summary[1])}},
                   {"median_abs_error", {row.median_abs_error[0], row.median_abs_error[1]}},
                   {"within_0.1", {row.within_tenth[0], row.within_tenth[1]}}});
    }
    out["thm1"] = std::move(r);
  }

  if (config.contains("thm2")) {
    any = true;
    const auto& j = config.at("thm2");
    const auto d = distribution_from_json(field<nlohmann::json>(j, "thm2", "distribution"));
    const auto res = thm2_ratio_check(d, field<double>(j, "thm2", "threshold"), m_grid(j, "thm2"),
                                      positive(j, "thm2", "replications"), seed, workers,
                                      field_or<int>(j, "thm2", "T_ratio", 4));
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : res.rows) {
      rows.push_back({{"m", row.m}, {"T", row.T}, {"excluded", row.excluded},
                      {"ratio", to_json(row.ratio_summary)}});
    }
    out["thm2"] = {{"rate", res.rate},
                   {"analytic_limit", res.analytic_limit},
                   {"bound", res.bound},
                   {"bound_violated", res.bound_violated},
                   {"rows", std::move(rows)}};
  }

  if (!any) {
    throw ConfigError(
        "theory config: no known section (etc_gaussian, etc_general, ld_profile, thm1, thm2)");
  }
  return out;
}

}  // namespace bdb
