#include "amass/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <fmt/format.h>

namespace amass::analysis {

using store::NameSet;

namespace {

NameSet intersect(const NameSet& a, const NameSet& b) {
  NameSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t intersection_size(const NameSet& a, const NameSet& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

void require_same_tld(const ground_truth::ZoneSnapshot& zone, const store::AsOfView& view) {
  if (zone.tld != view.tld) {
    throw AnalysisError(AnalysisErrc::TldMismatch, "zone is for '" + zone.tld + "' but view is for '" + view.tld + "'");
  }
}

}  // namespace

CoverageReport CoverageReport::from_partition(std::string tld, Date cutoff, std::uint64_t total,
                                              std::uint64_t ct_only, std::uint64_t cc_only, std::uint64_t both) {
  CoverageReport r;
  r.tld = std::move(tld);
  r.cutoff = cutoff;
  r.total = total;
  r.ct_only = ct_only;
  r.cc_only = cc_only;
  r.both = both;
  r.covered = ct_only + cc_only + both;
  r.not_covered = total >= r.covered ? total - r.covered : 0;
  r.ct_total = ct_only + both;
  r.cc_total = cc_only + both;
  return r;
}

std::uint64_t display_percent(std::uint64_t part, std::uint64_t whole) {
  if (whole == 0) return 0;
  return (200 * part + whole) / (2 * whole);
}

std::vector<std::string> identity_violations(const CoverageReport& r, std::uint64_t tolerance) {
  std::vector<std::string> out;
  auto check = [&](const char* identity, std::uint64_t lhs, std::uint64_t rhs) {
    std::uint64_t diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    if (diff > tolerance) out.push_back(fmt::format("{}: {} != {}", identity, lhs, rhs));
  };
  check("covered = ct_only + cc_only + both", r.covered, r.ct_only + r.cc_only + r.both);
  check("ct_total = ct_only + both", r.ct_total, r.ct_only + r.both);
  check("cc_total = cc_only + both", r.cc_total, r.cc_only + r.both);
  check("total = covered + not_covered", r.total, r.covered + r.not_covered);
  return out;
}

void check_identities(const CoverageReport& r, std::uint64_t tolerance) {
  auto violations = identity_violations(r, tolerance);
  if (violations.empty()) return;
  std::string msg = "coverage report for '" + r.tld + "' violates:";
  for (const auto& v : violations) msg += " [" + v + "]";
  throw AnalysisError(AnalysisErrc::IdentityViolation, msg);
}

CoverageReport coverage_report(const ground_truth::ZoneSnapshot& zone, const store::AsOfView& view) {
  require_same_tld(zone, view);
  auto ct = intersect(view.ct_names, zone.domains);
  auto cc = intersect(view.cc_names, zone.domains);
  std::uint64_t both = intersection_size(ct, cc);
  auto r = CoverageReport::from_partition(zone.tld, view.cutoff, zone.domains.size(), ct.size() - both,
                                          cc.size() - both, both);

  NameSet amassed;
  std::set_union(view.ct_names.begin(), view.ct_names.end(), view.cc_names.begin(), view.cc_names.end(),
                 std::back_inserter(amassed));
  r.amassed_not_in_zone = amassed.size() - intersection_size(amassed, zone.domains);

  check_identities(r);
  return r;
}

double weighted_average(const std::vector<CoverageReport>& reports) {
  if (reports.empty()) throw AnalysisError(AnalysisErrc::EmptyInput, "no coverage reports to average");
  std::uint64_t covered = 0;
  std::uint64_t total = 0;
  for (const auto& r : reports) {
    if (r.cutoff != reports.front().cutoff) {
      throw AnalysisError(AnalysisErrc::CutoffMismatch, "weighted average over reports with different cut-offs");
    }
    covered += r.covered;
    total += r.total;
  }
  if (total == 0) throw AnalysisError(AnalysisErrc::EmptyInput, "all zones are empty");
  return double(covered) / double(total);
}

std::vector<LogCoverage> single_log_ranking(const ground_truth::ZoneSnapshot& zone, const store::AsOfView& view) {
  require_same_tld(zone, view);
  auto ct_in_zone = intersect(view.ct_names, zone.domains);
  std::vector<LogCoverage> out;
  out.reserve(view.per_log_names.size());
  for (const auto& [log, names] : view.per_log_names) {
    LogCoverage lc;
    lc.log = log;
    lc.covered = intersection_size(names, ct_in_zone);
    if (!ct_in_zone.empty()) lc.fraction = double(lc.covered) / double(ct_in_zone.size());
    out.push_back(std::move(lc));
  }
  std::sort(out.begin(), out.end(), [](const LogCoverage& a, const LogCoverage& b) {
    if (a.covered != b.covered) return a.covered > b.covered;
    return a.log < b.log;
  });
  return out;
}

std::optional<double> expired_contribution(const ground_truth::ZoneSnapshot& zone, const store::AsOfView& view) {
  require_same_tld(zone, view);
  auto ct_in_zone = intersect(view.ct_names, zone.domains);
  if (ct_in_zone.empty()) return std::nullopt;
  return double(intersection_size(view.expired_only_names, ct_in_zone)) / double(ct_in_zone.size());
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Both: return "Both";
    case Category::CtOnly: return "CT-only";
    case Category::CcOnly: return "CC-only";
    case Category::Neither: return "Neither";
  }
  return "?";
}

std::string_view to_string(PortClass p) {
  switch (p) {
    case PortClass::No: return "No";
    case PortClass::HttpOnly: return "HTTP-only";
    case PortClass::HttpsOnly: return "HTTPS-only";
    case PortClass::BothPorts: return "Both-ports";
  }
  return "?";
}

PortClass port_class(std::string_view domain, const ground_truth::ARecordTable& a_records,
                     const ground_truth::PortScanTable& ports) {
  auto it = a_records.find(std::string(domain));
  if (it == a_records.end()) return PortClass::No;
  bool http = false;
  bool https = false;
  for (const auto& ip : it->second) {
    auto open = ports.find(ip);
    if (open == ports.end()) continue;
    http = http || open->second.contains(80);
    https = https || open->second.contains(443);
  }
  if (http && https) return PortClass::BothPorts;
  if (http) return PortClass::HttpOnly;
  if (https) return PortClass::HttpsOnly;
  return PortClass::No;
}

WebPresenceReport web_presence_report(const ground_truth::ZoneSnapshot& zone, const store::AsOfView& view,
                                      const ground_truth::ARecordTable& a_records,
                                      const ground_truth::PortScanTable& ports) {
  require_same_tld(zone, view);
  WebPresenceReport report;
  report.tld = zone.tld;
  report.cutoff = view.cutoff;
  for (const auto& d : zone.domains) {
    bool ct = store::contains(view.ct_names, d);
    bool cc = store::contains(view.cc_names, d);
    Category cat = ct && cc ? Category::Both : ct ? Category::CtOnly : cc ? Category::CcOnly : Category::Neither;
    auto& row = report.categories[static_cast<std::size_t>(cat)];
    ++row.size;
    auto a = a_records.find(d);
    if (a != a_records.end() && !a->second.empty()) {
      ++row.a_record_yes;
    } else {
      ++row.a_record_no;
    }
    ++row.ports[static_cast<std::size_t>(port_class(d, a_records, ports))];
  }
  return report;
}

double LagCdf::at(std::int64_t days) const {
  double f = 0.0;
  for (const auto& p : points) {
    if (p.lag_days > days) break;
    f = p.cumulative_fraction;
  }
  return f;
}

LagCdf lag_cdf(const std::map<std::string, Date>& first_ct_seen, const std::map<std::string, Date>& first_zone_seen) {
  if (first_zone_seen.empty()) throw AnalysisError(AnalysisErrc::EmptyInput, "no newly registered domains");
  LagCdf cdf;
  std::map<std::int64_t, std::uint64_t> histogram;
  for (const auto& [domain, zone_day] : first_zone_seen) {
    auto ct = first_ct_seen.find(domain);
    if (ct == first_ct_seen.end()) {
      ++cdf.excluded_never_seen;
      continue;
    }
    std::int64_t lag = (ct->second - zone_day).count();
    if (lag < 0) {
      ++cdf.clamped_negative;
      lag = 0;
    }
    ++histogram[lag];
    ++cdf.sample_count;
  }
  std::uint64_t running = 0;
  for (const auto& [lag, count] : histogram) {
    running += count;
    // The last point is exactly 1.0 because running == sample_count there.
    cdf.points.push_back({lag, count, double(running) / double(cdf.sample_count)});
  }
  return cdf;
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw AnalysisError(AnalysisErrc::EmptyInput, "quantile of empty sample");
  double h = p * double(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(h));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - double(lo)) * (sorted[hi] - sorted[lo]);
}

BucketReport bucket_report(const std::vector<TldCoverage>& tlds) {
  if (tlds.empty()) throw AnalysisError(AnalysisErrc::EmptyInput, "no TLDs to bucket");
  BucketReport report;
  std::map<int, std::vector<double>> by_exponent;
  for (const auto& t : tlds) {
    if (t.total == 0) {
      ++report.skipped_empty_zones;
      continue;
    }
    int exponent = 0;
    for (auto v = t.total; v >= 10; v /= 10) ++exponent;
    by_exponent[exponent].push_back(double(t.covered) / double(t.total));
  }
  for (auto& [exponent, values] : by_exponent) {
    std::sort(values.begin(), values.end());
    Bucket b;
    b.exponent = exponent;
    b.tld_count = values.size();
    b.min = values.front();
    b.q1 = quantile(values, 0.25);
    b.median = quantile(values, 0.5);
    b.q3 = quantile(values, 0.75);
    b.max = values.back();
    report.buckets.push_back(b);
  }
  return report;
}

}  // namespace amass::analysis
