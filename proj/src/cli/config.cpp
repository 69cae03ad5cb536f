#include "amass/config.hpp"

#include <cstdlib>
#include <set>

#include <json.hpp>

#include "amass/io.hpp"

namespace amass::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void only_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
T get(const json& obj, const char* key, std::string_view where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + "." + key + " is missing or has the wrong type");
  }
}

Date get_date(const json& obj, const char* key, std::string_view where) {
  auto text = get<std::string>(obj, key, where);
  auto d = parse_date(text);
  if (!d) throw ConfigError(std::string(where) + "." + key + " is not a YYYY-MM-DD date: " + text);
  return *d;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

}  // namespace

void Config::validate() const {
  std::set<std::string> names;
  for (const auto& log : ct_logs) {
    if (log.name.empty()) throw ConfigError("ct_logs entry without a name");
    if (!names.insert(log.name).second) throw ConfigError("duplicate log name '" + log.name + "'");
    try {
      log.validate();
    } catch (const ct::CtError& e) {
      throw ConfigError(e.what());
    }
  }
  if (concurrency.max_parallel_logs < 1) throw ConfigError("concurrency.max_parallel_logs must be at least 1");
  if (concurrency.page_retry_limit < 1) throw ConfigError("concurrency.page_retry_limit must be at least 1");
  if (page_size < 1) throw ConfigError("page_size must be at least 1");
  if (psl_path.empty()) throw ConfigError("psl_path is required");
  if (store_dir.empty()) throw ConfigError("store_dir is required");
}

Config parse_config(std::string_view json_text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(root, "config",
            {"ct_logs", "psl_path", "psl_version", "store_dir", "tlds", "concurrency", "page_size", "strict_mode"});

  Config cfg;
  if (root.contains("ct_logs")) {
    if (!root["ct_logs"].is_array()) throw ConfigError("ct_logs must be an array");
    for (const auto& entry : root["ct_logs"]) {
      only_keys(entry, "ct_logs[]", {"name", "base_url", "shard_window"});
      ct::CtLogDescriptor log;
      log.name = get<std::string>(entry, "name", "ct_logs[]");
      log.base_url = get<std::string>(entry, "base_url", "ct_logs[]");
      if (entry.contains("shard_window") && !entry["shard_window"].is_null()) {
        const auto& w = entry["shard_window"];
        only_keys(w, "shard_window", {"start", "end"});
        log.shard_window = std::pair{get_date(w, "start", "shard_window"), get_date(w, "end", "shard_window")};
      }
      cfg.ct_logs.push_back(std::move(log));
    }
  }
  if (root.contains("psl_path")) cfg.psl_path = resolve(base_dir, get<std::string>(root, "psl_path", "config"));
  if (root.contains("psl_version")) cfg.psl_version = get<std::string>(root, "psl_version", "config");
  if (root.contains("store_dir")) cfg.store_dir = resolve(base_dir, get<std::string>(root, "store_dir", "config"));
  if (root.contains("tlds")) {
    for (const auto& t : get<std::vector<std::string>>(root, "tlds", "config")) {
      std::string lower;
      for (char c : t) lower += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
      cfg.tlds.push_back(lower);
    }
  }
  if (root.contains("concurrency")) {
    const auto& c = root["concurrency"];
    only_keys(c, "concurrency", {"max_parallel_logs", "page_retry_limit", "retry_backoff_ms"});
    if (c.contains("max_parallel_logs")) {
      cfg.concurrency.max_parallel_logs = get<unsigned>(c, "max_parallel_logs", "concurrency");
    }
    if (c.contains("page_retry_limit")) cfg.concurrency.page_retry_limit = get<int>(c, "page_retry_limit", "concurrency");
    if (c.contains("retry_backoff_ms")) {
      cfg.concurrency.retry_backoff_ms = get<unsigned>(c, "retry_backoff_ms", "concurrency");
    }
  }
  if (root.contains("page_size")) cfg.page_size = get<std::uint64_t>(root, "page_size", "config");
  if (root.contains("strict_mode")) cfg.strict_mode = get<bool>(root, "strict_mode", "config");
  return cfg;
}

Config load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  auto cfg = parse_config(text, path.parent_path());
  cfg.validate();
  return cfg;
}

std::optional<fs::path> resolve_config_path(const std::string& flag) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv("CCTLD_AMASS_CONFIG"); env && *env) return fs::path(env);
  return std::nullopt;
}

}  // namespace amass::cli
