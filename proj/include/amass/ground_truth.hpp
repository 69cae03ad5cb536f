#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amass/domain.hpp"
#include "amass/store.hpp"
#include "amass/time.hpp"

namespace amass::ground_truth {

enum class GroundTruthErrc { IoError, UnsortedSeries, MixedTld };

class GroundTruthError : public std::runtime_error {
 public:
  GroundTruthError(GroundTruthErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  GroundTruthErrc code() const noexcept { return code_; }

 private:
  GroundTruthErrc code_;
};

/// Registered domains delegated in one TLD zone on one date.
struct ZoneSnapshot {
  std::string tld;
  Date date;
  store::NameSet domains;
};

struct ZoneLoadStats {
  std::uint64_t lines = 0;
  std::uint64_t malformed = 0;
  std::uint64_t rejected_other_tld = 0;
  std::uint64_t duplicates = 0;
  bool empty_zone = false;
};

struct LoadOptions {
  SuffixPolicy policy = SuffixPolicy::Lenient;
  /// Skip the first line of the file.
  bool header = false;
};

/// Reads a newline-delimited name list. Each name is canonicalized and reduced
/// to its registered domain; names outside `tld` are rejected and counted.
ZoneSnapshot load_zone_snapshot(const std::filesystem::path& path, std::string_view tld, Date date,
                                const SuffixRuleSet& rules, const LoadOptions& options, ZoneLoadStats& stats);

/// Same, from an in-memory list of names.
ZoneSnapshot make_zone_snapshot(const std::vector<std::string>& names, std::string_view tld, Date date,
                                const SuffixRuleSet& rules, SuffixPolicy policy, ZoneLoadStats& stats);

/// First date each domain is present in a date-ordered series of daily
/// snapshots. Domains in the first snapshot have an unknown registration date
/// and are left out. A domain that disappears and returns keeps its first date.
std::map<std::string, Date> zone_first_seen(const std::vector<ZoneSnapshot>& series);

/// Dotted-quad IPv4 address.
struct Ipv4 {
  std::uint32_t value = 0;
  static std::optional<Ipv4> parse(std::string_view text);
  std::string str() const;
  friend auto operator<=>(const Ipv4&, const Ipv4&) = default;
};

using ARecordTable = std::map<std::string, std::set<Ipv4>>;
using PortScanTable = std::map<Ipv4, std::set<std::uint16_t>>;

struct TableLoadStats {
  std::uint64_t lines = 0;
  std::uint64_t malformed = 0;
};

/// CSV rows `domain,ipv4`. Rows for the same domain are merged.
ARecordTable load_a_records(const std::filesystem::path& path, bool header, TableLoadStats& stats);
/// CSV rows `ipv4,port`, port in 1..65535.
PortScanTable load_port_scan(const std::filesystem::path& path, bool header, TableLoadStats& stats);

}  // namespace amass::ground_truth
