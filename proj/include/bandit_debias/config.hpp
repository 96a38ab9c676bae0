#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "bandit_debias/distributions.hpp"

namespace bdb {

/// Reads a JSON array of distribution records (or {"arms": [...]}).
std::vector<RewardDistribution> arms_from_json(const nlohmann::json& j);

/// Evaluates every section present in a theory config and returns the results.
///
///   {"etc_gaussian": {"mu1", "mu2", "var1", "var2", "m", "T"},
///    "etc_general":  {"arms": [d1, d2], "m", "T", "mc_replications"?},
///    "ld_profile":   {"distribution": d, "threshold": x, "m_grid": [...], "T_ratio"?},
///    "thm1":         {"params": {...}, "m_grid": [...], "replications"},
///    "thm2":         {"distribution": d, "threshold": x, "m_grid": [...], "replications"}}
nlohmann::json run_theory(const nlohmann::json& config, std::uint64_t seed, int workers);

}  // namespace bdb
