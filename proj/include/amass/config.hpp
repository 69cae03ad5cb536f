#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amass/ct/client.hpp"

namespace amass::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Concurrency {
  unsigned max_parallel_logs = 4;
  /// Attempts per HTTP request before a log is given up.
  int page_retry_limit = 5;
  unsigned retry_backoff_ms = 1000;
};

struct Config {
  std::vector<ct::CtLogDescriptor> ct_logs;
  std::filesystem::path psl_path;
  /// Label written into every report; derived from the list's hash when absent.
  std::optional<std::string> psl_version;
  std::filesystem::path store_dir;
  /// TLDs the operator studies; informational, reports take TLDs from their inputs.
  std::vector<std::string> tlds;
  Concurrency concurrency;
  std::uint64_t page_size = 256;
  bool strict_mode = false;

  /// Throws ConfigError: duplicate or invalid logs, max_parallel_logs of 0,
  /// missing psl_path or store_dir.
  void validate() const;
};

/// Parses the JSON config. Relative paths are resolved against `base_dir`.
/// Throws ConfigError on syntax errors, unknown keys or wrong types.
Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Reads and validates a config file.
Config load_config(const std::filesystem::path& path);

/// Path from the flag, else $CCTLD_AMASS_CONFIG; nullopt when neither is set.
std::optional<std::filesystem::path> resolve_config_path(const std::string& flag);

}  // namespace amass::cli
