#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "amass/analysis.hpp"

namespace amass::report {

/// Empty cells (monostate) are written as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, std::string, std::uint64_t, std::int64_t, double>;

/// A machine-readable report: fixed column names, one row per record.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// RFC 4180 CSV with a header line; doubles with 6 decimals; LF line ends.
std::string to_csv(const Table& t);
/// JSON array of objects keyed by the CSV column names.
std::string to_json(const Table& t);

/// Writes `<dir>/<name>.csv` and, when requested, `<dir>/<name>.json`.
void write_table(const std::filesystem::path& dir, const std::string& name, const Table& t, bool json);

struct CoverageRow {
  analysis::CoverageReport report;
  std::optional<double> expired_fraction;
};

/// Columns: tld, cutoff, psl_version, the counts of CoverageReport, a
/// `<count>_frac` column per count relative to total, expired_only_frac.
Table coverage_table(const std::vector<CoverageRow>& rows, const std::string& psl_version);

/// Columns: tld, cutoff, psl_version, rank, log, covered, fraction.
Table log_ranking_table(const std::string& tld, Date cutoff, const std::vector<analysis::LogCoverage>& ranking,
                        const std::string& psl_version);

/// One row per category: sizes, A-record presence and web-port classes.
Table web_presence_table(const analysis::WebPresenceReport& report, const std::string& psl_version);

/// Columns: tld, psl_version, lag_days, count, cumulative_fraction.
Table lag_table(const std::string& tld, const analysis::LagCdf& cdf, const std::string& psl_version);
/// Columns: tld, psl_version, samples, excluded_never_seen, clamped_negative.
Table lag_summary_table(const std::string& tld, const analysis::LagCdf& cdf, const std::string& psl_version);

/// Columns: cutoff, psl_version, bucket_exponent, bucket_lo, bucket_hi, tld_count, min, q1, median, q3, max.
Table bucket_table(Date cutoff, const analysis::BucketReport& report, const std::string& psl_version);

/// Table-1 style text with whole-point percentages.
std::string coverage_summary(const std::vector<CoverageRow>& rows);

}  // namespace amass::report
