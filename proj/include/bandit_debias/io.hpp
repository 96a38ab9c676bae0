#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bandit_debias/simulator.hpp"

namespace bdb {

/// Writes via a sibling temp file and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// `log.csv` -> `log.meta.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// CSV body with header `t,arm,reward`; t and arm are 1-based, rewards are
/// printed with 17 significant digits so they parse back bit-exactly.
std::string log_to_csv(const BanditLog& log);
nlohmann::json log_metadata(const BanditLog& log);

void write_log(const BanditLog& log, const std::filesystem::path& csv,
               const std::filesystem::path& meta);

/// Parses a CSV + metadata pair. Unknown policies and malformed metadata raise
/// ConfigError naming the field; malformed rows raise DataError.
BanditLog parse_log(std::string_view csv, const nlohmann::json& meta);
BanditLog read_log(const std::filesystem::path& csv, const std::filesystem::path& meta);

}  // namespace bdb
