#include "bandit_debias/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "bandit_debias/errors.hpp"

namespace bdb {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw DataError("rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

fs::path sidecar_path(const fs::path& csv) {
  fs::path meta = csv;
  meta.replace_extension(".meta.json");
  return meta;
}

std::string log_to_csv(const BanditLog& log) {
  std::string out = "t,arm,reward\n";
  out.reserve(out.size() + log.horizon * 32);
  char buf[64];
  for (std::size_t t = 0; t < log.horizon; ++t) {
    const int n = std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", t + 1, log.actions[t] + 1,
                                log.rewards[t]);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

nlohmann::json log_metadata(const BanditLog& log) {
  nlohmann::json meta{{"K", log.arms},
                      {"T", log.horizon},
                      {"policy", to_json(log.policy)},
                      {"world", log.world == World::Real ? "real" : "bootstrap"}};
  if (log.seed) meta["seed"] = *log.seed;
  return meta;
}

void write_log(const BanditLog& log, const fs::path& csv, const fs::path& meta) {
  write_file_atomic(csv, log_to_csv(log));
  write_file_atomic(meta, dump_json(log_metadata(log)));
}

namespace {

template <class T>
T parse_field(std::string_view s, std::size_t line, const char* name) {
  T value{};
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw DataError("log line " + std::to_string(line) + ": bad " + name + " \"" +
                    std::string(s) + "\"");
  }
  return value;
}

std::size_t required_count(const nlohmann::json& meta, const char* field) {
  if (!meta.contains(field)) throw ConfigError(std::string("metadata: missing field \"") + field + "\"");
  const auto& v = meta.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ConfigError(std::string("metadata: field \"") + field + "\" must be a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

BanditLog parse_log(std::string_view csv, const nlohmann::json& meta) {
  if (!meta.is_object()) throw ConfigError("metadata: expected a JSON object");
  BanditLog log;
  log.arms = required_count(meta, "K");
  log.horizon = required_count(meta, "T");
  if (!meta.contains("policy")) throw ConfigError("metadata: missing field \"policy\"");
  log.policy = policy_from_json(meta.at("policy"));
  if (meta.contains("seed") && !meta.at("seed").is_null()) {
    if (!meta.at("seed").is_number_unsigned()) {
      throw ConfigError("metadata: field \"seed\" must be a non-negative integer");
    }
    log.seed = meta.at("seed").get<std::uint64_t>();
  }
  const std::string world = meta.value("world", std::string("real"));
  if (world == "real") {
    log.world = World::Real;
  } else if (world == "bootstrap") {
    log.world = World::Bootstrap;
  } else {
    throw ConfigError("metadata: field \"world\" must be \"real\" or \"bootstrap\"");
  }

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "t,arm,reward") throw DataError("log: expected header \"t,arm,reward\"");
      header_seen = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
      throw DataError("log line " + std::to_string(line_no) + ": expected three fields");
    }
    const auto t = parse_field<std::size_t>(line.substr(0, c1), line_no, "t");
    const auto arm = parse_field<std::size_t>(line.substr(c1 + 1, c2 - c1 - 1), line_no, "arm");
    const auto reward = parse_field<double>(line.substr(c2 + 1), line_no, "reward");
    if (t != log.actions.size() + 1) {
      throw DataError("log line " + std::to_string(line_no) + ": rounds must be 1, 2, ... in order");
    }
    if (arm < 1 || arm > log.arms) {
      throw DataError("log line " + std::to_string(line_no) + ": arm outside [1, K]");
    }
    log.actions.push_back(arm - 1);
    log.rewards.push_back(reward);
  }
  if (!header_seen) throw DataError("log: empty file");
  log.validate();
  return log;
}

BanditLog read_log(const fs::path& csv, const fs::path& meta) {
  return parse_log(read_file(csv), read_json(meta));
}

}  // namespace bdb
