#include "amass/ground_truth.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <charconv>

#include "amass/io.hpp"

namespace amass::ground_truth {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename Fn>
void for_each_line(const fs::path& path, bool header, Fn&& fn) {
  try {
    LineReader in(path);
    std::string line;
    bool first = true;
    while (in.next(line)) {
      if (std::exchange(first, false) && header) continue;
      fn(std::string_view(line));
    }
  } catch (const IoError& e) {
    throw GroundTruthError(GroundTruthErrc::IoError, e.what());
  }
}

void add_name(std::string_view raw, std::string_view tld, const SuffixRuleSet& rules, SuffixPolicy policy,
              ZoneLoadStats& stats, store::NameSet& out) {
  ++stats.lines;
  try {
    auto reg = rules.registered_domain(DomainName::parse(raw), policy);
    if (reg.tld() != tld) {
      ++stats.rejected_other_tld;
      return;
    }
    out.emplace_back(reg.str());
  } catch (const DomainError&) {
    ++stats.malformed;
  }
}

void finish(store::NameSet& names, ZoneLoadStats& stats) {
  std::sort(names.begin(), names.end());
  auto before = names.size();
  names.erase(std::unique(names.begin(), names.end()), names.end());
  stats.duplicates += before - names.size();
  stats.empty_zone = names.empty();
}

}  // namespace

ZoneSnapshot load_zone_snapshot(const fs::path& path, std::string_view tld, Date date, const SuffixRuleSet& rules,
                                const LoadOptions& options, ZoneLoadStats& stats) {
  ZoneSnapshot snap{std::string(tld), date, {}};
  for_each_line(path, options.header, [&](std::string_view line) {
    auto name = trim(line);
    if (name.empty()) return;
    add_name(name, tld, rules, options.policy, stats, snap.domains);
  });
  finish(snap.domains, stats);
  return snap;
}

ZoneSnapshot make_zone_snapshot(const std::vector<std::string>& names, std::string_view tld, Date date,
                                const SuffixRuleSet& rules, SuffixPolicy policy, ZoneLoadStats& stats) {
  ZoneSnapshot snap{std::string(tld), date, {}};
  for (const auto& n : names) add_name(trim(n), tld, rules, policy, stats, snap.domains);
  finish(snap.domains, stats);
  return snap;
}

std::map<std::string, Date> zone_first_seen(const std::vector<ZoneSnapshot>& series) {
  std::map<std::string, Date> out;
  if (series.empty()) return out;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].tld != series[0].tld) {
      throw GroundTruthError(GroundTruthErrc::MixedTld, "zone series mixes TLDs '" + series[0].tld + "' and '" +
                                                            series[i].tld + "'");
    }
    if (!(series[i - 1].date < series[i].date)) {
      throw GroundTruthError(GroundTruthErrc::UnsortedSeries,
                             "zone series not strictly ascending at " + format_date(series[i].date));
    }
  }
  const auto& initial = series.front().domains;
  for (std::size_t i = 1; i < series.size(); ++i) {
    for (const auto& d : series[i].domains) {
      if (store::contains(initial, d)) continue;
      out.try_emplace(d, series[i].date);
    }
  }
  return out;
}

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
  std::string s(text);
  in_addr addr{};
  if (::inet_pton(AF_INET, s.c_str(), &addr) != 1) return std::nullopt;
  return Ipv4{ntohl(addr.s_addr)};
}

std::string Ipv4::str() const {
  return std::to_string(value >> 24) + "." + std::to_string((value >> 16) & 0xFF) + "." +
         std::to_string((value >> 8) & 0xFF) + "." + std::to_string(value & 0xFF);
}

namespace {

bool split_pair(std::string_view line, std::string_view& a, std::string_view& b) {
  auto comma = line.find(',');
  if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) return false;
  a = trim(line.substr(0, comma));
  b = trim(line.substr(comma + 1));
  return !a.empty() && !b.empty();
}

}  // namespace

ARecordTable load_a_records(const fs::path& path, bool header, TableLoadStats& stats) {
  ARecordTable table;
  for_each_line(path, header, [&](std::string_view line) {
    if (trim(line).empty()) return;
    ++stats.lines;
    std::string_view name, addr;
    if (!split_pair(line, name, addr)) {
      ++stats.malformed;
      return;
    }
    auto ip = Ipv4::parse(addr);
    if (!ip) {
      ++stats.malformed;
      return;
    }
    try {
      table[std::string(DomainName::parse(name).str())].insert(*ip);
    } catch (const DomainError&) {
      ++stats.malformed;
    }
  });
  return table;
}

PortScanTable load_port_scan(const fs::path& path, bool header, TableLoadStats& stats) {
  PortScanTable table;
  for_each_line(path, header, [&](std::string_view line) {
    if (trim(line).empty()) return;
    ++stats.lines;
    std::string_view addr, port_text;
    if (!split_pair(line, addr, port_text)) {
      ++stats.malformed;
      return;
    }
    auto ip = Ipv4::parse(addr);
    unsigned port = 0;
    auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (!ip || ec != std::errc{} || p != port_text.data() + port_text.size() || port < 1 || port > 65535) {
      ++stats.malformed;
      return;
    }
    table[*ip].insert(static_cast<std::uint16_t>(port));
  });
  return table;
}

}  // namespace amass::ground_truth
