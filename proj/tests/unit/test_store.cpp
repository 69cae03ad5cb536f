#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <thread>

#include "amass/store.hpp"
#include "fixture_certs.hpp"
#include "temp_dir.hpp"

using namespace amass;
using namespace amass::store;
using fixture::at;

namespace {

Record rec(std::string domain, Source src, std::string origin, const char* start, const char* end) {
  return Record{{std::move(domain), src, std::move(origin)}, {at(start), at(end)}};
}

std::vector<Record> scan_all(const Store& s) {
  std::vector<Record> out;
  s.scan([&](const Record& r) { out.push_back(r); });
  return out;
}

StoreErrc error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const StoreError& e) {
    return e.code();
  }
  FAIL("expected StoreError");
  return StoreErrc::IoError;
}

/// Straightforward model of the store: a map of merged values per key.
struct Oracle {
  std::map<ProvenanceKey, ProvenanceValue> data;

  void add(const Record& r) {
    auto [it, inserted] = data.emplace(r.key, r.value);
    if (!inserted) {
      it->second.min_start = std::min(it->second.min_start, r.value.min_start);
      it->second.max_end = std::max(it->second.max_end, r.value.max_end);
    }
  }

  std::vector<Record> records() const {
    std::vector<Record> out;
    for (const auto& [k, v] : data) out.push_back({k, v});
    return out;
  }

  AsOfView view(const std::string& tld, Date cutoff) const {
    TimePoint limit{cutoff};
    std::set<std::string> ct, cc;
    std::map<std::string, std::set<std::string>> per_log;
    std::map<std::string, TimePoint> latest_end;
    for (const auto& [k, v] : data) {
      if (!k.domain.ends_with("." + tld)) continue;
      if (k.source == Source::CT) {
        auto& e = latest_end.try_emplace(k.domain, v.max_end).first->second;
        e = std::max(e, v.max_end);
      }
      if (v.min_start >= limit) continue;
      if (k.source == Source::CT) {
        ct.insert(k.domain);
        per_log[k.origin].insert(k.domain);
      } else {
        cc.insert(k.domain);
      }
    }
    AsOfView out;
    out.tld = tld;
    out.cutoff = cutoff;
    out.ct_names.assign(ct.begin(), ct.end());
    out.cc_names.assign(cc.begin(), cc.end());
    for (const auto& [log, names] : per_log) out.per_log_names[log].assign(names.begin(), names.end());
    for (const auto& d : ct) {
      if (latest_end.at(d) < limit) out.expired_only_names.push_back(d);
    }
    return out;
  }
};

void check_view(const AsOfView& got, const AsOfView& want) {
  CHECK(got.tld == want.tld);
  CHECK(got.cutoff == want.cutoff);
  CHECK(got.ct_names == want.ct_names);
  CHECK(got.cc_names == want.cc_names);
  CHECK(got.per_log_names == want.per_log_names);
  CHECK(got.expired_only_names == want.expired_only_names);
}

Record random_record(std::mt19937_64& rng) {
  static const char* tlds[] = {"nl", "be", "sk", "dk"};
  static const char* logs[] = {"argon", "xenon", "nimbus", "oak"};
  static const char* snaps[] = {"CC-MAIN-2020-24", "CC-MAIN-2021-10", "CC-MAIN-2022-33"};
  Record r;
  r.key.domain = "d" + std::to_string(rng() % 60) + "." + tlds[rng() % 4];
  r.key.source = rng() % 3 == 0 ? Source::CC : Source::CT;
  r.key.origin = r.key.source == Source::CT ? logs[rng() % 4] : snaps[rng() % 3];
  auto start = at("2019-01-01") + std::chrono::seconds(rng() % (4LL * 365 * 86400));
  r.value = {start, start + std::chrono::seconds(rng() % (400LL * 86400))};
  return r;
}

}  // namespace

TEST_CASE("record text form") {
  auto r = rec("example.nl", Source::CT, "argon2022", "2022-01-01T00:00:00Z", "2022-04-01T12:00:00Z");
  CHECK(format_record(r) == "example.nl\tCT\targon2022\t2022-01-01T00:00:00Z\t2022-04-01T12:00:00Z");
  CHECK(parse_record(format_record(r)) == r);
  CHECK(error_of([] { parse_record("a.nl\tCT\tx\t2022-01-01T00:00:00Z"); }) == StoreErrc::CorruptSegment);
  CHECK(error_of([] { parse_record("a.nl\tXX\tx\t2022-01-01T00:00:00Z\t2022-01-01T00:00:00Z"); }) ==
        StoreErrc::CorruptSegment);
  CHECK(error_of([] { parse_record("a.nl\tCT\tx\t2022-01-01\t2022-01-01T00:00:00Z"); }) == StoreErrc::CorruptSegment);
  CHECK(error_of([] { parse_record("a.nl\tCT\tx\t2022-02-01T00:00:00Z\t2022-01-01T00:00:00Z"); }) ==
        StoreErrc::CorruptSegment);
  CHECK(error_of([] { parse_record("\tCT\tx\t2022-01-01T00:00:00Z\t2022-01-01T00:00:00Z"); }) ==
        StoreErrc::CorruptSegment);
  CHECK(error_of([] { parse_record("a.nl\tCT\tx\t2022-01-01T00:00:00Z\t2022-01-01T00:00:00Z\textra"); }) ==
        StoreErrc::CorruptSegment);
}

TEST_CASE("observations become records") {
  auto rules = SuffixRuleSet::parse("nl\n");
  ct::CtLogDescriptor log{"argon", "https://ct.example/", std::nullopt};
  ct::CertificateInfo info;
  info.names = {"www.a.nl"};
  info.not_before = at("2021-02-03T04:05:06Z");
  info.not_after = at("2021-05-03T04:05:06Z");
  auto ct_obs = ct::extract_observations(info, log, 9, rules).observations.at(0);
  CHECK(from_observation(ct_obs) ==
        rec("a.nl", Source::CT, "argon", "2021-02-03T04:05:06Z", "2021-05-03T04:05:06Z"));

  cc::CcStats stats;
  auto cc_obs = cc::observe_line(R"(nl,a)/ 20200601000000 {"url":"https://a.nl/"})",
                                 cc::CrawlSnapshotId::parse("CC-MAIN-2020-24"), rules, {}, stats);
  REQUIRE(cc_obs);
  CHECK(from_observation(*cc_obs) == rec("a.nl", Source::CC, "CC-MAIN-2020-24", "2020-06-08", "2020-06-08"));
}

TEST_CASE("merging keeps the earliest start and latest end") {
  fixture::TempDir dir;
  Store s(dir.path());
  s.append(rec("a.nl", Source::CT, "X", "2021-01-01", "2021-04-01"));
  s.append(rec("a.nl", Source::CT, "X", "2020-01-01", "2020-04-01"));
  s.flush();
  s.append(rec("a.nl", Source::CT, "X", "2020-06-01", "2022-01-01"));
  s.flush();
  auto all = scan_all(s);
  REQUIRE(all.size() == 1);
  CHECK(all[0] == rec("a.nl", Source::CT, "X", "2020-01-01", "2022-01-01"));
  CHECK(s.segments().size() == 2);
}

TEST_CASE("appends are invisible until flushed") {
  fixture::TempDir dir;
  Store s(dir.path());
  s.append(rec("a.nl", Source::CC, "CC-MAIN-2020-24", "2020-06-08", "2020-06-08"));
  CHECK(s.buffered() == 1);
  CHECK(scan_all(s).empty());
  CHECK(s.segments().empty());
  s.flush();
  CHECK(s.buffered() == 0);
  CHECK(scan_all(s).size() == 1);
  s.flush();  // empty buffer writes nothing
  CHECK(s.segments().size() == 1);
}

TEST_CASE("invalid records are refused") {
  fixture::TempDir dir;
  Store s(dir.path());
  CHECK(error_of([&] { s.append(rec("a\tb.nl", Source::CT, "X", "2021-01-01", "2021-01-02")); }) ==
        StoreErrc::InvalidRecord);
  CHECK(error_of([&] { s.append(rec("a.nl", Source::CT, "", "2021-01-01", "2021-01-02")); }) ==
        StoreErrc::InvalidRecord);
  CHECK(error_of([&] { s.append(rec("a.nl", Source::CT, "X", "2021-01-03", "2021-01-02")); }) ==
        StoreErrc::InvalidRecord);
}

TEST_CASE("cut-off is strictly before 00:00 UTC of the cut-off date") {
  fixture::TempDir dir;
  Store s(dir.path());
  s.append(rec("early.nl", Source::CT, "X", "2023-05-31T23:59:59Z", "2023-08-01T00:00:00Z"));
  s.append(rec("ontime.nl", Source::CT, "X", "2023-06-01T00:00:00Z", "2023-08-01T00:00:00Z"));
  s.append(rec("crawl.nl", Source::CC, "CC-MAIN-2023-22", "2023-05-29", "2023-05-29"));
  s.append(rec("crawl2.nl", Source::CC, "CC-MAIN-2023-23", "2023-06-05", "2023-06-05"));
  s.flush();
  auto v = s.query_asof("nl", *parse_date("2023-06-01"));
  CHECK(v.ct_names == NameSet{"early.nl"});
  CHECK(v.cc_names == NameSet{"crawl.nl"});
  auto later = s.query_asof("nl", *parse_date("2023-06-05"));
  CHECK(later.cc_names == NameSet{"crawl.nl"});
  CHECK(later.ct_names == NameSet{"early.nl", "ontime.nl"});
  CHECK(s.query_asof("nl", *parse_date("2023-06-06")).cc_names == NameSet{"crawl.nl", "crawl2.nl"});
}

TEST_CASE("expired-only domains") {
  fixture::TempDir dir;
  Store s(dir.path());
  s.append(rec("old.nl", Source::CT, "X", "2019-01-01", "2020-01-01"));
  s.append(rec("renewed.nl", Source::CT, "X", "2019-01-01", "2020-01-01"));
  s.append(rec("renewed.nl", Source::CT, "Y", "2019-06-01", "2024-01-01"));
  s.append(rec("edge.nl", Source::CT, "X", "2023-01-01", "2023-06-01"));
  s.append(rec("crawled.nl", Source::CC, "CC-MAIN-2019-10", "2019-03-04", "2019-03-04"));
  s.flush();
  auto v = s.query_asof("nl", *parse_date("2023-06-01"));
  CHECK(v.ct_names == NameSet{"edge.nl", "old.nl", "renewed.nl"});
  // edge.nl expires exactly at the cut-off instant, which is not before it.
  CHECK(v.expired_only_names == NameSet{"old.nl"});
  CHECK(v.per_log_names.at("X") == NameSet{"edge.nl", "old.nl", "renewed.nl"});
  CHECK(v.per_log_names.at("Y") == NameSet{"renewed.nl"});
}

TEST_CASE("TLD matching is by whole label") {
  fixture::TempDir dir;
  Store s(dir.path());
  s.append(rec("a.nl", Source::CT, "X", "2020-01-01", "2020-02-01"));
  s.append(rec("a.xnl", Source::CT, "X", "2020-01-01", "2020-02-01"));
  s.append(rec("b.co.nl", Source::CT, "X", "2020-01-01", "2020-02-01"));
  s.flush();
  CHECK(s.query_asof("nl", *parse_date("2021-01-01")).ct_names == NameSet{"a.nl", "b.co.nl"});
  CHECK(s.query_asof("xnl", *parse_date("2021-01-01")).ct_names == NameSet{"a.xnl"});
}

TEST_CASE("unknown TLD: empty view, or an error in strict mode") {
  fixture::TempDir dir;
  Store s(dir.path());
  s.append(rec("a.nl", Source::CT, "X", "2020-01-01", "2020-02-01"));
  s.flush();
  auto v = s.query_asof("se", *parse_date("2021-01-01"));
  CHECK(v.ct_names.empty());
  CHECK(v.cc_names.empty());
  CHECK(error_of([&] { s.query_asof("se", *parse_date("2021-01-01"), true); }) == StoreErrc::UnknownTld);
  CHECK_NOTHROW(s.query_asof("nl", *parse_date("2019-01-01"), true));
}

TEST_CASE("randomized stores match the oracle before and after compaction") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 12; ++round) {
    fixture::TempDir dir;
    StoreOptions opt;
    opt.flush_threshold = 1 + rng() % 40;
    opt.gzip_segments = round % 3 == 0;
    Store s(dir.path(), opt);
    Oracle oracle;
    int n = 50 + static_cast<int>(rng() % 400);
    for (int i = 0; i < n; ++i) {
      auto r = random_record(rng);
      oracle.add(r);
      s.append(r);
      if (rng() % 50 == 0) s.flush();
    }
    s.flush();
    CHECK(scan_all(s) == oracle.records());

    std::vector<Date> cutoffs;
    for (int c = 0; c < 4; ++c) cutoffs.push_back(*parse_date("2019-01-01") + std::chrono::days(rng() % 1800));
    for (auto cutoff : cutoffs) {
      for (const char* tld : {"nl", "be", "sk", "dk"}) check_view(s.query_asof(tld, cutoff), oracle.view(tld, cutoff));
    }

    auto seg = s.compact();
    REQUIRE(seg);
    CHECK(s.segments().size() == 1);
    CHECK(seg->record_count == oracle.data.size());
    CHECK(scan_all(s) == oracle.records());
    for (auto cutoff : cutoffs) check_view(s.query_asof("nl", cutoff), oracle.view("nl", cutoff));

    std::map<std::string, TimePoint> first;
    for (const auto& [k, v] : oracle.data) {
      if (k.source != Source::CT || !k.domain.ends_with(".be")) continue;
      auto [it, ins] = first.emplace(k.domain, v.min_start);
      if (!ins) it->second = std::min(it->second, v.min_start);
    }
    CHECK(s.first_ct_seen("be") == first);
  }
}

TEST_CASE("compaction beyond the fan-in limit, orphans removed, reopen continues numbering") {
  fixture::TempDir dir;
  Oracle oracle;
  std::mt19937_64 rng(99);
  {
    Store s(dir.path(), StoreOptions{1, false});
    for (int i = 0; i < 300; ++i) {
      auto r = random_record(rng);
      oracle.add(r);
      s.append(r);  // threshold 1: one segment per append
    }
    CHECK(s.segments().size() == 300);
    CHECK(error_of([&] { scan_all(s); }) == StoreErrc::IoError);
  }
  fixture::write_text(dir / "segments/stray.seg.tmp", "junk");
  Store s(dir.path());
  auto seg = s.compact();
  REQUIRE(seg);
  CHECK(s.segments().size() == 1);
  CHECK(scan_all(s) == oracle.records());
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir / "segments")) ++files;
  CHECK(files == 1);

  s.append(rec("zz.nl", Source::CT, "X", "2020-01-01", "2020-01-02"));
  s.flush();
  auto segs = s.segments();
  REQUIRE(segs.size() == 2);
  CHECK(segs[1].path.filename().string() > segs[0].path.filename().string());
  CHECK(s.compact()->record_count == oracle.data.size() + 1);
}

TEST_CASE("compacting an empty store or a single segment") {
  fixture::TempDir dir;
  Store s(dir.path());
  CHECK_FALSE(s.compact());
  s.append(rec("a.nl", Source::CT, "X", "2020-01-01", "2020-01-02"));
  s.flush();
  auto before = s.segments();
  auto seg = s.compact();
  REQUIRE(seg);
  CHECK(seg->path == before[0].path);
}

TEST_CASE("compaction output is independent of how records were split into segments") {
  std::mt19937_64 rng(5);
  std::vector<Record> records;
  for (int i = 0; i < 500; ++i) records.push_back(random_record(rng));
  std::string first_bytes;
  for (std::size_t threshold : {1u, 7u, 100u, 100000u}) {
    fixture::TempDir dir;
    Store s(dir.path(), StoreOptions{threshold, false});
    for (const auto& r : records) s.append(r);
    s.flush();
    auto seg = s.compact();
    REQUIRE(seg);
    auto bytes = fixture::read_text(seg->path);
    if (first_bytes.empty()) first_bytes = bytes;
    CHECK(bytes == first_bytes);
  }
}

TEST_CASE("corrupt segments are detected") {
  fixture::TempDir dir;
  Store s(dir.path());
  s.append(rec("a.nl", Source::CT, "X", "2020-01-01", "2020-01-02"));
  s.append(rec("b.nl", Source::CT, "X", "2020-01-01", "2020-01-02"));
  s.flush();
  auto path = s.segments().at(0).path;
  auto good = fixture::read_text(path);

  fixture::write_text(path, "b.nl\tCT\tX\t2020-01-01T00:00:00Z\t2020-01-02T00:00:00Z\n"
                            "a.nl\tCT\tX\t2020-01-01T00:00:00Z\t2020-01-02T00:00:00Z\n");
  CHECK(error_of([&] { scan_all(s); }) == StoreErrc::CorruptSegment);
  fixture::write_text(path, "a.nl\tCT\n");
  CHECK(error_of([&] { scan_all(s); }) == StoreErrc::CorruptSegment);
  s.append(rec("c.nl", Source::CT, "X", "2020-01-01", "2020-01-02"));
  s.flush();
  CHECK(error_of([&] { s.compact(); }) == StoreErrc::CorruptSegment);
  CHECK(s.segments().size() == 2);  // inputs survive a failed compaction
  std::filesystem::remove(path);
  CHECK(error_of([&] { scan_all(s); }) == StoreErrc::IoError);
}

TEST_CASE("gzip segments") {
  fixture::TempDir dir;
  Store s(dir.path(), StoreOptions{1u << 18, true});
  s.append(rec("a.nl", Source::CT, "X", "2020-01-01", "2020-01-02"));
  s.flush();
  auto path = s.segments().at(0).path;
  CHECK(path.string().ends_with(".seg.gz"));
  auto raw = fixture::read_text(path);
  REQUIRE(raw.size() > 2);
  CHECK(static_cast<unsigned char>(raw[0]) == 0x1f);
  CHECK(static_cast<unsigned char>(raw[1]) == 0x8b);
  CHECK(scan_all(s) == std::vector<Record>{rec("a.nl", Source::CT, "X", "2020-01-01", "2020-01-02")});
}

TEST_CASE("concurrent appends from several threads") {
  fixture::TempDir dir;
  Store s(dir.path(), StoreOptions{64, false});
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 500; ++i) {
        s.append(rec("d" + std::to_string(i) + ".nl", Source::CT, "log" + std::to_string(t), "2020-01-01",
                     "2020-01-02"));
      }
    });
  }
  for (auto& th : threads) th.join();
  s.flush();
  s.compact();
  CHECK(scan_all(s).size() == 2000);
}
