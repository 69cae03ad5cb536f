#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amass/ground_truth.hpp"
#include "amass/store.hpp"
#include "amass/time.hpp"

namespace amass::analysis {

enum class AnalysisErrc { TldMismatch, EmptyInput, CutoffMismatch, IdentityViolation };

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(AnalysisErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  AnalysisErrc code() const noexcept { return code_; }

 private:
  AnalysisErrc code_;
};

/// Zone coverage split by source. All counts are registered domains in the zone.
struct CoverageReport {
  std::string tld;
  Date cutoff;
  std::uint64_t total = 0;
  std::uint64_t covered = 0;
  std::uint64_t not_covered = 0;
  std::uint64_t ct_only = 0;
  std::uint64_t cc_only = 0;
  std::uint64_t both = 0;
  std::uint64_t ct_total = 0;
  std::uint64_t cc_total = 0;
  /// Amassed names (either source, before the cut-off) that are not in the zone.
  std::uint64_t amassed_not_in_zone = 0;

  /// Fills covered, not_covered, ct_total and cc_total from the partition.
  static CoverageReport from_partition(std::string tld, Date cutoff, std::uint64_t total, std::uint64_t ct_only,
                                       std::uint64_t cc_only, std::uint64_t both);

  double fraction(std::uint64_t part) const { return total == 0 ? 0.0 : double(part) / double(total); }
};

/// Whole percentage points, rounded half up; 0 when the whole is 0.
std::uint64_t display_percent(std::uint64_t part, std::uint64_t whole);

/// Human-readable descriptions of every violated identity; empty when the
/// report is consistent. `tolerance` allows published, rounded figures to be
/// checked (each identity may be off by at most that many units).
std::vector<std::string> identity_violations(const CoverageReport& r, std::uint64_t tolerance = 0);

/// Throws AnalysisError(IdentityViolation) listing every violated identity.
void check_identities(const CoverageReport& r, std::uint64_t tolerance = 0);

/// Intersects both sources with the zone and counts the partition.
CoverageReport coverage_report(const ground_truth::ZoneSnapshot& zone, const store::AsOfView& view);

/// Sum of covered over sum of total.
double weighted_average(const std::vector<CoverageReport>& reports);

struct LogCoverage {
  std::string log;
  std::uint64_t covered = 0;
  /// Share of all in-zone CT names; absent when there are none.
  std::optional<double> fraction;
};

/// Per-log in-zone coverage, best first; ties by log name.
std::vector<LogCoverage> single_log_ranking(const ground_truth::ZoneSnapshot& zone, const store::AsOfView& view);

/// Share of in-zone CT names known only from expired certificates; absent
/// when no CT name is in the zone.
std::optional<double> expired_contribution(const ground_truth::ZoneSnapshot& zone, const store::AsOfView& view);

enum class Category { Both, CtOnly, CcOnly, Neither };
enum class PortClass { No, HttpOnly, HttpsOnly, BothPorts };

inline constexpr std::array<Category, 4> kCategories{Category::Both, Category::CtOnly, Category::CcOnly,
                                                     Category::Neither};
inline constexpr std::array<PortClass, 4> kPortClasses{PortClass::No, PortClass::HttpOnly, PortClass::HttpsOnly,
                                                       PortClass::BothPorts};

std::string_view to_string(Category c);
std::string_view to_string(PortClass p);

struct CategoryPresence {
  std::uint64_t size = 0;
  std::uint64_t a_record_yes = 0;
  std::uint64_t a_record_no = 0;
  std::array<std::uint64_t, 4> ports{};  // indexed by PortClass
};

struct WebPresenceReport {
  std::string tld;
  Date cutoff;
  std::array<CategoryPresence, 4> categories{};  // indexed by Category

  const CategoryPresence& at(Category c) const { return categories[static_cast<std::size_t>(c)]; }
};

/// Port class of a domain from the union of open ports over all its addresses.
PortClass port_class(std::string_view domain, const ground_truth::ARecordTable& a_records,
                     const ground_truth::PortScanTable& ports);

WebPresenceReport web_presence_report(const ground_truth::ZoneSnapshot& zone, const store::AsOfView& view,
                                      const ground_truth::ARecordTable& a_records,
                                      const ground_truth::PortScanTable& ports);

struct LagPoint {
  std::int64_t lag_days = 0;
  std::uint64_t count = 0;
  double cumulative_fraction = 0.0;
};

struct LagCdf {
  /// One point per distinct lag, ascending.
  std::vector<LagPoint> points;
  std::uint64_t sample_count = 0;
  /// Newly registered domains never seen in CT.
  std::uint64_t excluded_never_seen = 0;
  /// Domains seen in CT before the zone; their lag is clamped to 0.
  std::uint64_t clamped_negative = 0;

  /// Fraction of samples with lag <= days.
  double at(std::int64_t days) const;
};

LagCdf lag_cdf(const std::map<std::string, Date>& first_ct_seen, const std::map<std::string, Date>& first_zone_seen);

struct TldCoverage {
  std::string tld;
  std::uint64_t total = 0;
  std::uint64_t covered = 0;
};

struct Bucket {
  int exponent = 0;  ///< zone sizes in [10^exponent, 10^(exponent+1))
  std::uint64_t tld_count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

struct BucketReport {
  std::vector<Bucket> buckets;  ///< ascending exponent, only non-empty buckets
  std::uint64_t skipped_empty_zones = 0;
};

/// Linear interpolation between closest ranks over sorted values, p in [0, 1].
double quantile(const std::vector<double>& sorted, double p);

BucketReport bucket_report(const std::vector<TldCoverage>& tlds);

}  // namespace amass::analysis
