#include "amass/cc.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>

namespace amass::cc {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

CrawlSnapshotId CrawlSnapshotId::parse(std::string_view raw) {
  constexpr std::string_view prefix = "CC-MAIN-";
  auto fail = [&](const char* why) { return SnapshotIdError("bad snapshot id '" + std::string(raw) + "': " + why); };
  if (raw.size() != prefix.size() + 7 || raw.substr(0, prefix.size()) != prefix || raw[prefix.size() + 4] != '-') {
    throw fail("expected CC-MAIN-YYYY-WW");
  }
  auto ys = raw.substr(prefix.size(), 4);
  auto ws = raw.substr(prefix.size() + 5, 2);
  if (!all_digits(ys) || !all_digits(ws)) throw fail("expected CC-MAIN-YYYY-WW");
  int year = 0;
  unsigned week = 0;
  std::from_chars(ys.data(), ys.data() + ys.size(), year);
  std::from_chars(ws.data(), ws.data() + ws.size(), week);
  if (year < 2008 || year > 2100) throw fail("year outside 2008..2100");
  auto monday = iso_week_monday(year, week);
  if (!monday) throw fail("no such ISO week in that year");
  CrawlSnapshotId id;
  id.raw_ = std::string(raw);
  id.date_ = *monday;
  return id;
}

std::optional<std::string> parse_index_line(std::string_view line) {
  auto sp1 = line.find(' ');
  if (sp1 == std::string_view::npos || sp1 == 0) return std::nullopt;
  auto sp2 = line.find(' ', sp1 + 1);
  if (sp2 == std::string_view::npos) return std::nullopt;
  auto timestamp = line.substr(sp1 + 1, sp2 - sp1 - 1);
  if (timestamp.size() != 14 || !all_digits(timestamp)) return std::nullopt;
  auto j = nlohmann::json::parse(line.substr(sp2 + 1), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  auto it = j.find("url");
  if (it == j.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

std::optional<DomainName> host_of(std::string_view url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
  auto authority = url.substr(scheme_end + 3);
  authority = authority.substr(0, authority.find_first_of("/?#"));
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  if (authority.empty() || authority.front() == '[') return std::nullopt;
  if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    auto port = authority.substr(colon + 1);
    if (!port.empty() && !all_digits(port)) return std::nullopt;
    authority = authority.substr(0, colon);
  }
  try {
    return DomainName::parse(authority);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

CcStats& CcStats::operator+=(const CcStats& o) {
  lines += o.lines;
  observations += o.observations;
  blank_lines += o.blank_lines;
  malformed_lines += o.malformed_lines;
  bad_hosts += o.bad_hosts;
  unregistrable += o.unregistrable;
  filtered_tld += o.filtered_tld;
  return *this;
}

std::optional<CrawlObservation> observe_line(std::string_view line, const CrawlSnapshotId& snapshot,
                                             const SuffixRuleSet& rules, const CcOptions& options,
                                             CcStats& stats) {
  ++stats.lines;
  if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
    ++stats.blank_lines;
    return std::nullopt;
  }
  auto url = parse_index_line(line);
  if (!url) {
    ++stats.malformed_lines;
    return std::nullopt;
  }
  auto host = host_of(*url);
  if (!host) {
    ++stats.bad_hosts;
    return std::nullopt;
  }
  try {
    auto reg = rules.registered_domain(*host, options.policy);
    if (!options.tld_filter.empty() && reg.tld() != options.tld_filter) {
      ++stats.filtered_tld;
      return std::nullopt;
    }
    ++stats.observations;
    return CrawlObservation{std::move(reg), snapshot};
  } catch (const DomainError&) {
    ++stats.unregistrable;
    return std::nullopt;
  }
}

void extract_observations(std::istream& in, const CrawlSnapshotId& snapshot, const SuffixRuleSet& rules,
                          const CcOptions& options, const CrawlCallback& emit, CcStats& stats) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto obs = observe_line(line, snapshot, rules, options, stats)) emit(*obs);
  }
}

void extract_observations(LineReader& in, const CrawlSnapshotId& snapshot, const SuffixRuleSet& rules,
                          const CcOptions& options, const CrawlCallback& emit, CcStats& stats) {
  std::string line;
  while (in.next(line)) {
    if (auto obs = observe_line(line, snapshot, rules, options, stats)) emit(*obs);
  }
}

}  // namespace amass::cc
