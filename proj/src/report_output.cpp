#include "amass/report_output.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "amass/io.hpp"

namespace amass::report {

namespace {

std::string csv_field(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return fmt::format("{:.6f}", v); }
  } visitor;
  return std::visit(visitor, c);
}

Cell optional_fraction(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(t.columns[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
      const auto& c = row[i];
      auto& slot = obj[t.columns[i]];
      if (std::holds_alternative<std::monostate>(c)) {
        slot = nullptr;
      } else if (auto* s = std::get_if<std::string>(&c)) {
        slot = *s;
      } else if (auto* u = std::get_if<std::uint64_t>(&c)) {
        slot = *u;
      } else if (auto* i64 = std::get_if<std::int64_t>(&c)) {
        slot = *i64;
      } else {
        slot = std::round(std::get<double>(c) * 1e6) / 1e6;
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void write_table(const std::filesystem::path& dir, const std::string& name, const Table& t, bool json) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / (name + ".csv"), to_csv(t));
  if (json) write_file_atomic(dir / (name + ".json"), to_json(t));
}

Table coverage_table(const std::vector<CoverageRow>& rows, const std::string& psl_version) {
  Table t;
  t.columns = {"tld",           "cutoff",           "psl_version",      "total",         "covered",
               "not_covered",   "ct_only",          "cc_only",          "both",          "ct_total",
               "cc_total",      "amassed_not_in_zone", "covered_frac",  "not_covered_frac", "ct_only_frac",
               "cc_only_frac",  "both_frac",        "ct_total_frac",    "cc_total_frac", "expired_only_frac"};
  for (const auto& [r, expired] : rows) {
    auto frac = [&](std::uint64_t v) -> Cell {
      if (r.total == 0) return std::monostate{};
      return r.fraction(v);
    };
    t.rows.push_back({r.tld, format_date(r.cutoff), psl_version, r.total, r.covered, r.not_covered, r.ct_only,
                      r.cc_only, r.both, r.ct_total, r.cc_total, r.amassed_not_in_zone, frac(r.covered),
                      frac(r.not_covered), frac(r.ct_only), frac(r.cc_only), frac(r.both), frac(r.ct_total),
                      frac(r.cc_total), optional_fraction(expired)});
  }
  return t;
}

Table log_ranking_table(const std::string& tld, Date cutoff, const std::vector<analysis::LogCoverage>& ranking,
                        const std::string& psl_version) {
  Table t;
  t.columns = {"tld", "cutoff", "psl_version", "rank", "log", "covered", "fraction"};
  std::uint64_t rank = 0;
  for (const auto& lc : ranking) {
    t.rows.push_back({tld, format_date(cutoff), psl_version, ++rank, lc.log, lc.covered,
                      optional_fraction(lc.fraction)});
  }
  return t;
}

Table web_presence_table(const analysis::WebPresenceReport& report, const std::string& psl_version) {
  Table t;
  t.columns = {"tld",
               "cutoff",
               "psl_version",
               "category",
               "size",
               "a_record_yes",
               "a_record_no",
               "a_record_yes_frac",
               "a_record_no_frac",
               "ports_no",
               "ports_http_only",
               "ports_https_only",
               "ports_both",
               "ports_no_frac",
               "ports_http_only_frac",
               "ports_https_only_frac",
               "ports_both_frac"};
  for (auto cat : analysis::kCategories) {
    const auto& row = report.at(cat);
    auto frac = [&](std::uint64_t v) -> Cell {
      if (row.size == 0) return std::monostate{};
      return double(v) / double(row.size);
    };
    t.rows.push_back({report.tld, format_date(report.cutoff), psl_version, std::string(to_string(cat)), row.size,
                      row.a_record_yes, row.a_record_no, frac(row.a_record_yes), frac(row.a_record_no),
                      row.ports[0], row.ports[1], row.ports[2], row.ports[3], frac(row.ports[0]),
                      frac(row.ports[1]), frac(row.ports[2]), frac(row.ports[3])});
  }
  return t;
}

Table lag_table(const std::string& tld, const analysis::LagCdf& cdf, const std::string& psl_version) {
  Table t;
  t.columns = {"tld", "psl_version", "lag_days", "count", "cumulative_fraction"};
  for (const auto& p : cdf.points) t.rows.push_back({tld, psl_version, p.lag_days, p.count, p.cumulative_fraction});
  return t;
}

Table lag_summary_table(const std::string& tld, const analysis::LagCdf& cdf, const std::string& psl_version) {
  Table t;
  t.columns = {"tld", "psl_version", "samples", "excluded_never_seen", "clamped_negative"};
  t.rows.push_back({tld, psl_version, cdf.sample_count, cdf.excluded_never_seen, cdf.clamped_negative});
  return t;
}

Table bucket_table(Date cutoff, const analysis::BucketReport& report, const std::string& psl_version) {
  Table t;
  t.columns = {"cutoff", "psl_version", "bucket_exponent", "bucket_lo", "bucket_hi", "tld_count",
               "min",    "q1",          "median",          "q3",        "max"};
  for (const auto& b : report.buckets) {
    std::uint64_t lo = 1;
    for (int i = 0; i < b.exponent; ++i) lo *= 10;
    t.rows.push_back({format_date(cutoff), psl_version, std::int64_t{b.exponent}, lo, lo * 10, b.tld_count, b.min,
                      b.q1, b.median, b.q3, b.max});
  }
  return t;
}

std::string coverage_summary(const std::vector<CoverageRow>& rows) {
  std::string out = fmt::format("{:<8} {:<10} {:>10} {:>16} {:>16} {:>16} {:>16} {:>16} {:>16} {:>16}\n", "tld",
                                "cutoff", "total", "covered", "not covered", "CT only", "CC only", "CT and CC",
                                "in CT", "in CC");
  for (const auto& [r, expired] : rows) {
    auto cell = [&](std::uint64_t v) { return fmt::format("{} ({}%)", v, analysis::display_percent(v, r.total)); };
    out += fmt::format("{:<8} {:<10} {:>10} {:>16} {:>16} {:>16} {:>16} {:>16} {:>16} {:>16}\n", r.tld,
                       format_date(r.cutoff), r.total, cell(r.covered), cell(r.not_covered), cell(r.ct_only),
                       cell(r.cc_only), cell(r.both), cell(r.ct_total), cell(r.cc_total));
  }
  return out;
}

}  // namespace amass::report
