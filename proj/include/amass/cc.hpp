#pragma once

#include <functional>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "amass/domain.hpp"
#include "amass/io.hpp"
#include "amass/time.hpp"

namespace amass::cc {

class SnapshotIdError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Common Crawl snapshot such as `CC-MAIN-2020-24`, dated to the Monday of
/// its ISO week.
class CrawlSnapshotId {
 public:
  /// Throws SnapshotIdError for malformed ids, years outside 2008..2100 or
  /// weeks that do not exist in that year.
  static CrawlSnapshotId parse(std::string_view raw);

  const std::string& raw_id() const noexcept { return raw_; }
  Date derived_date() const noexcept { return date_; }
  friend bool operator==(const CrawlSnapshotId& a, const CrawlSnapshotId& b) noexcept { return a.raw_ == b.raw_; }

 private:
  std::string raw_;
  Date date_;
};

struct CrawlObservation {
  RegisteredDomain domain;
  CrawlSnapshotId snapshot;
};

/// `url` field of a CDX-J line `<SURT> <timestamp> <json>`; nullopt for blank
/// or malformed lines.
std::optional<std::string> parse_index_line(std::string_view line);

/// Host of a URL as a canonical name; nullopt for IP literals and non-domains.
std::optional<DomainName> host_of(std::string_view url);

/// Per-file ledger: lines == observations + skipped().
struct CcStats {
  std::uint64_t lines = 0;
  std::uint64_t observations = 0;
  std::uint64_t blank_lines = 0;
  std::uint64_t malformed_lines = 0;
  std::uint64_t bad_hosts = 0;
  std::uint64_t unregistrable = 0;
  std::uint64_t filtered_tld = 0;

  std::uint64_t skipped() const noexcept {
    return blank_lines + malformed_lines + bad_hosts + unregistrable + filtered_tld;
  }
  CcStats& operator+=(const CcStats& o);
};

struct CcOptions {
  SuffixPolicy policy = SuffixPolicy::Lenient;
  /// When non-empty, only registered domains under this TLD are emitted.
  std::string tld_filter;
};

using CrawlCallback = std::function<void(const CrawlObservation&)>;

/// Runs one line through parse, host extraction and registered-domain mapping.
std::optional<CrawlObservation> observe_line(std::string_view line, const CrawlSnapshotId& snapshot,
                                             const SuffixRuleSet& rules, const CcOptions& options,
                                             CcStats& stats);

/// Emits one observation per usable line. Duplicates are left to the sink.
void extract_observations(std::istream& in, const CrawlSnapshotId& snapshot, const SuffixRuleSet& rules,
                          const CcOptions& options, const CrawlCallback& emit, CcStats& stats);
void extract_observations(LineReader& in, const CrawlSnapshotId& snapshot, const SuffixRuleSet& rules,
                          const CcOptions& options, const CrawlCallback& emit, CcStats& stats);

}  // namespace amass::cc
