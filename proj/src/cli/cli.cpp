#include "amass/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <openssl/evp.h>
#include <CLI11.hpp>
#include <fmt/format.h>

#include "amass/analysis.hpp"
#include "amass/cc.hpp"
#include "amass/config.hpp"
#include "amass/ct/ingest.hpp"
#include "amass/ground_truth.hpp"
#include "amass/io.hpp"
#include "amass/report_output.hpp"
#include "amass/store.hpp"

namespace amass::cli {

namespace fs = std::filesystem;

namespace {

/// Bad flags or missing inputs; exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Args {
  std::string config;
  bool strict = false;
  // ingest
  std::vector<std::string> logs;
  std::string snapshot;
  std::vector<std::string> files;
  // report
  std::string cutoff;
  std::vector<std::string> tld;
  std::vector<std::string> zone;
  std::string zone_dir;
  std::string a_records;
  std::string ports;
  std::string out = ".";
  bool json = false;
  bool header = false;
};

struct Context {
  Config config;
  SuffixRuleSet rules;
  SuffixPolicy policy = SuffixPolicy::Lenient;
  bool strict = false;
};

std::string sha256_prefix(std::string_view text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  for (unsigned i = 0; i < 6 && i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

Context load_context(const Args& args) {
  auto path = resolve_config_path(args.config);
  if (!path) throw ConfigError("no config: pass --config or set CCTLD_AMASS_CONFIG");
  Context ctx;
  ctx.config = load_config(*path);
  ctx.strict = ctx.config.strict_mode || args.strict;
  ctx.policy = ctx.strict ? SuffixPolicy::Strict : SuffixPolicy::Lenient;

  std::string psl;
  try {
    psl = read_file(ctx.config.psl_path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("cannot read public suffix list: ") + e.what());
  }
  std::string version = ctx.config.psl_version.value_or("sha256:" + sha256_prefix(psl));
  try {
    ctx.rules = SuffixRuleSet::parse(psl, version);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("public suffix list: ") + e.what());
  }

  std::error_code ec;
  fs::create_directories(ctx.config.store_dir, ec);
  if (ec || ::access(ctx.config.store_dir.c_str(), W_OK) != 0) {
    throw ConfigError("store_dir is not writable: " + ctx.config.store_dir.string());
  }
  return ctx;
}

/// Ingest keeps every TLD unless --tld narrows it.
std::set<std::string, std::less<>> tld_filter(const Args& args) {
  std::set<std::string, std::less<>> out;
  for (const auto& t : args.tld) {
    try {
      out.emplace(DomainName::parse(t).str());
    } catch (const DomainError& e) {
      throw UsageError("bad TLD '" + t + "': " + e.what());
    }
  }
  return out;
}

std::string checkpoint_file_name(std::string_view log_name) {
  std::string out;
  for (char c : log_name) {
    bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                c == '-' || c == '_';
    out += keep ? c : '_';
  }
  return out + ".ckpt";
}

/// Drops observations outside the configured TLDs before they reach the store.
class FilteringSink final : public ct::CertSink {
 public:
  FilteringSink(store::Store& store, const std::set<std::string, std::less<>>& tlds) : store_(store), tlds_(tlds) {}

  void append(std::span<const ct::CertObservation> batch) override {
    if (tlds_.empty()) {
      store_.append(batch);
      return;
    }
    std::vector<ct::CertObservation> kept;
    for (const auto& obs : batch) {
      if (tlds_.contains(obs.domain.tld())) kept.push_back(obs);
    }
    store_.append(std::span<const ct::CertObservation>(kept));
  }
  void flush() override { store_.flush(); }

 private:
  store::Store& store_;
  const std::set<std::string, std::less<>>& tlds_;
};

int cmd_ingest_ct(const Args& args, std::ostream& out, std::ostream& err) {
  auto ctx = load_context(args);
  std::vector<ct::CtLogDescriptor> selected;
  if (args.logs.empty()) {
    selected = ctx.config.ct_logs;
  } else {
    for (const auto& name : args.logs) {
      auto it = std::find_if(ctx.config.ct_logs.begin(), ctx.config.ct_logs.end(),
                             [&](const ct::CtLogDescriptor& l) { return l.name == name; });
      if (it == ctx.config.ct_logs.end()) throw UsageError("no log named '" + name + "' in config");
      selected.push_back(*it);
    }
  }
  if (selected.empty()) {
    out << "no CT logs configured\n";
    return kOk;
  }
  auto tlds = tld_filter(args);

  FileLock writer(ctx.config.store_dir / "WRITER", FileLock::Mode::Exclusive);
  store::Store store(ctx.config.store_dir);
  FilteringSink sink(store, tlds);
  fs::path checkpoints = ctx.config.store_dir / "checkpoints";
  fs::create_directories(checkpoints);

  ct::RetryPolicy retry;
  retry.max_attempts = ctx.config.concurrency.page_retry_limit;
  retry.initial_backoff = std::chrono::milliseconds(ctx.config.concurrency.retry_backoff_ms);

  std::mutex print_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failures{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) {
      const auto& log = selected[i];
      ct::IngestStats stats;
      try {
        ct::CtLogClient client(log, retry);
        ct::IngestOptions options;
        options.page_size = ctx.config.page_size;
        options.policy = ctx.policy;
        options.checkpoint_path = checkpoints / checkpoint_file_name(log.name);
        options.on_stage = [&](ct::IngestStage stage, const ct::IngestCheckpoint& cp, const ct::IngestStats&) {
          if (stage != ct::IngestStage::CheckpointSaved) return;
          std::lock_guard lock(print_mutex);
          out << fmt::format("{}: {}/{}\n", log.name, cp.next_index, cp.sth_size_at_checkpoint) << std::flush;
        };
        auto start = ct::load_checkpoint(options.checkpoint_path, log.name);
        auto done = ct::run_ingest(client, start, sink, ctx.rules, options, stats);
        std::lock_guard lock(print_mutex);
        out << fmt::format(
            "{}: done at {}/{} entries={} certificates={} malformed_leaf={} malformed_der={} names_skipped={} "
            "observations={}\n",
            log.name, done.next_index, done.sth_size_at_checkpoint, stats.entries_fetched, stats.certificates,
            stats.malformed_leaf, stats.malformed_der, stats.names_skipped, stats.observations);
      } catch (const std::exception& e) {
        ++failures;
        std::lock_guard lock(print_mutex);
        err << fmt::format("{}: failed after {} entries: {}\n", log.name, stats.entries_fetched, e.what());
      }
    }
  };

  std::size_t n_workers = std::min<std::size_t>(ctx.config.concurrency.max_parallel_logs, selected.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  store.flush();
  return failures == 0 ? kOk : kRuntimeFailure;
}

int cmd_ingest_cc(const Args& args, std::ostream& out, std::ostream&) {
  if (args.files.empty()) throw UsageError("no index files given");
  auto ctx = load_context(args);
  cc::CrawlSnapshotId snapshot;
  try {
    snapshot = cc::CrawlSnapshotId::parse(args.snapshot);
  } catch (const cc::SnapshotIdError& e) {
    throw UsageError(e.what());
  }
  auto tlds = tld_filter(args);

  FileLock writer(ctx.config.store_dir / "WRITER", FileLock::Mode::Exclusive);
  store::Store store(ctx.config.store_dir);
  cc::CcOptions options;
  options.policy = ctx.policy;
  cc::CcStats total;
  for (const auto& file : args.files) {
    cc::CcStats stats;
    LineReader reader(file);
    std::string line;
    while (reader.next(line)) {
      auto obs = cc::observe_line(line, snapshot, ctx.rules, options, stats);
      if (!obs) continue;
      if (!tlds.empty() && !tlds.contains(obs->domain.tld())) {
        --stats.observations;
        ++stats.filtered_tld;
        continue;
      }
      store.append(*obs);
    }
    out << fmt::format("{}: lines={} observations={} blank={} malformed={} bad_hosts={} unregistrable={} "
                       "filtered_tld={}\n",
                       file, stats.lines, stats.observations, stats.blank_lines, stats.malformed_lines,
                       stats.bad_hosts, stats.unregistrable, stats.filtered_tld);
    total += stats;
  }
  store.flush();
  out << fmt::format("{} ({}): {} observations from {} lines\n", snapshot.raw_id(), format_date(snapshot.derived_date()),
                     total.observations, total.lines);
  return kOk;
}

int cmd_compact(const Args& args, std::ostream& out, std::ostream&) {
  auto ctx = load_context(args);
  FileLock writer(ctx.config.store_dir / "WRITER", FileLock::Mode::Exclusive);
  FileLock lock(ctx.config.store_dir / "LOCK", FileLock::Mode::Exclusive);
  store::Store store(ctx.config.store_dir);
  auto before = store.segments().size();
  auto seg = store.compact();
  if (!seg) {
    out << "store is empty\n";
  } else {
    out << fmt::format("compacted {} segment(s) into {} with {} records\n", before, seg->path.filename().string(),
                       seg->record_count);
  }
  return kOk;
}

Date require_cutoff(const Args& args) {
  if (args.cutoff.empty()) throw UsageError("--cutoff is required");
  auto d = parse_date(args.cutoff);
  if (!d) throw UsageError("--cutoff is not a YYYY-MM-DD date: " + args.cutoff);
  return *d;
}

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw UsageError(std::string(flag) + " file not found: " + path);
}

/// TLD of a ground-truth file named `<tld>.<anything>`.
std::string tld_from_file_name(const fs::path& p) {
  auto name = p.filename().string();
  return name.substr(0, name.find('.'));
}

std::string canonical_tld(const std::string& raw) {
  try {
    auto name = DomainName::parse(raw);
    if (name.label_count() != 1) throw UsageError("not a TLD: " + raw);
    return std::string(name.str());
  } catch (const DomainError& e) {
    throw UsageError("bad TLD '" + raw + "': " + e.what());
  }
}

ground_truth::ZoneSnapshot load_zone(const Context& ctx, const Args& args, const fs::path& path,
                                     const std::string& tld, Date date, std::ostream& out) {
  ground_truth::ZoneLoadStats stats;
  ground_truth::LoadOptions options{ctx.policy, args.header};
  auto zone = ground_truth::load_zone_snapshot(path, tld, date, ctx.rules, options, stats);
  out << fmt::format("zone {} {}: {} domains from {} lines (malformed={} other_tld={} duplicates={})\n", tld,
                     path.string(), zone.domains.size(), stats.lines, stats.malformed, stats.rejected_other_tld,
                     stats.duplicates);
  return zone;
}

/// Pairs each --zone with a --tld, or takes the TLD from the file name.
std::vector<std::pair<std::string, fs::path>> zone_inputs(const Args& args) {
  if (args.zone.empty()) throw UsageError("--zone is required");
  if (!args.tld.empty() && args.tld.size() != args.zone.size()) {
    throw UsageError("give one --tld per --zone, or none");
  }
  std::vector<std::pair<std::string, fs::path>> out;
  for (std::size_t i = 0; i < args.zone.size(); ++i) {
    require_file(args.zone[i], "--zone");
    auto tld = args.tld.empty() ? tld_from_file_name(args.zone[i]) : args.tld[i];
    out.emplace_back(canonical_tld(tld), args.zone[i]);
  }
  return out;
}

int cmd_report_coverage(const Args& args, std::ostream& out, std::ostream&) {
  Date cutoff = require_cutoff(args);
  auto inputs = zone_inputs(args);
  auto ctx = load_context(args);
  FileLock lock(ctx.config.store_dir / "LOCK", FileLock::Mode::Shared);
  store::Store store(ctx.config.store_dir);
  const auto& psl = ctx.rules.version_tag();

  std::vector<report::CoverageRow> rows;
  report::Table ranking;
  for (const auto& [tld, path] : inputs) {
    auto zone = load_zone(ctx, args, path, tld, cutoff, out);
    auto view = store.query_asof(tld, cutoff, ctx.strict);
    rows.push_back({analysis::coverage_report(zone, view), analysis::expired_contribution(zone, view)});
    auto t = report::log_ranking_table(tld, cutoff, analysis::single_log_ranking(zone, view), psl);
    ranking.columns = t.columns;
    for (auto& r : t.rows) ranking.rows.push_back(std::move(r));
  }
  if (ranking.columns.empty()) ranking = report::log_ranking_table("", cutoff, {}, psl);
  if (rows.size() > 1) {
    std::uint64_t total = 0, ct_only = 0, cc_only = 0, both = 0, outside = 0;
    for (const auto& row : rows) {
      total += row.report.total;
      ct_only += row.report.ct_only;
      cc_only += row.report.cc_only;
      both += row.report.both;
      outside += row.report.amassed_not_in_zone;
    }
    auto all = analysis::CoverageReport::from_partition("ALL", cutoff, total, ct_only, cc_only, both);
    all.amassed_not_in_zone = outside;
    analysis::check_identities(all);
    rows.push_back({all, std::nullopt});
  }
  report::write_table(args.out, "coverage", report::coverage_table(rows, psl), args.json);
  report::write_table(args.out, "log_ranking", ranking, args.json);
  out << report::coverage_summary(rows);
  return kOk;
}

int cmd_report_web(const Args& args, std::ostream& out, std::ostream&) {
  Date cutoff = require_cutoff(args);
  auto inputs = zone_inputs(args);
  if (inputs.size() != 1) throw UsageError("the web report takes exactly one --zone");
  require_file(args.a_records, "--a-records");
  require_file(args.ports, "--ports");
  auto ctx = load_context(args);
  FileLock lock(ctx.config.store_dir / "LOCK", FileLock::Mode::Shared);
  store::Store store(ctx.config.store_dir);

  const auto& [tld, path] = inputs.front();
  auto zone = load_zone(ctx, args, path, tld, cutoff, out);
  ground_truth::TableLoadStats a_stats, port_stats;
  auto a_records = ground_truth::load_a_records(args.a_records, args.header, a_stats);
  auto ports = ground_truth::load_port_scan(args.ports, args.header, port_stats);
  out << fmt::format("a-records: {} rows ({} malformed); ports: {} rows ({} malformed)\n", a_stats.lines,
                     a_stats.malformed, port_stats.lines, port_stats.malformed);

  auto view = store.query_asof(tld, cutoff, ctx.strict);
  auto web = analysis::web_presence_report(zone, view, a_records, ports);
  std::uint64_t sized = 0;
  for (auto cat : analysis::kCategories) {
    const auto& row = web.at(cat);
    std::uint64_t port_sum = 0;
    for (auto v : row.ports) port_sum += v;
    if (row.a_record_yes + row.a_record_no != row.size || port_sum != row.size) {
      throw analysis::AnalysisError(analysis::AnalysisErrc::IdentityViolation,
                                    fmt::format("web cross-tab for {} does not sum to its size", to_string(cat)));
    }
    sized += row.size;
  }
  if (sized != zone.domains.size()) {
    throw analysis::AnalysisError(analysis::AnalysisErrc::IdentityViolation, "web categories do not cover the zone");
  }
  report::write_table(args.out, "web", report::web_presence_table(web, ctx.rules.version_tag()), args.json);
  for (auto cat : analysis::kCategories) {
    const auto& row = web.at(cat);
    out << fmt::format("{:<8} size={} a_record={} http_only={} https_only={} both_ports={}\n", to_string(cat),
                       row.size, row.a_record_yes, row.ports[1], row.ports[2], row.ports[3]);
  }
  return kOk;
}

int cmd_report_lag(const Args& args, std::ostream& out, std::ostream&) {
  if (args.zone_dir.empty()) throw UsageError("--zone-dir is required");
  if (!fs::is_directory(args.zone_dir)) throw UsageError("--zone-dir is not a directory: " + args.zone_dir);
  if (args.tld.size() != 1) throw UsageError("the lag report takes exactly one --tld");
  std::string tld = canonical_tld(args.tld.front());

  std::map<Date, fs::path> dated;
  for (const auto& entry : fs::directory_iterator(args.zone_dir)) {
    if (!entry.is_regular_file()) continue;
    auto name = entry.path().filename().string();
    if (name.size() < 10) continue;
    auto d = parse_date(std::string_view(name).substr(0, 10));
    if (!d) continue;
    if (!dated.emplace(*d, entry.path()).second) throw UsageError("two zone files for " + format_date(*d));
  }
  if (dated.size() < 2) throw UsageError("--zone-dir needs at least two YYYY-MM-DD zone files");

  auto ctx = load_context(args);
  FileLock lock(ctx.config.store_dir / "LOCK", FileLock::Mode::Shared);
  store::Store store(ctx.config.store_dir);

  std::vector<ground_truth::ZoneSnapshot> series;
  for (const auto& [date, path] : dated) series.push_back(load_zone(ctx, args, path, tld, date, out));
  auto first_zone = ground_truth::zone_first_seen(series);
  std::map<std::string, Date> first_ct;
  for (const auto& [domain, t] : store.first_ct_seen(tld)) first_ct.emplace(domain, floor_day(t));

  auto cdf = analysis::lag_cdf(first_ct, first_zone);
  const auto& psl = ctx.rules.version_tag();
  report::write_table(args.out, "lag", report::lag_table(tld, cdf, psl), args.json);
  report::write_table(args.out, "lag_summary", report::lag_summary_table(tld, cdf, psl), args.json);
  out << fmt::format("{}: {} new domains, {} seen in CT, {} never seen, {} clamped; within 5 days {:.6f}\n", tld,
                     first_zone.size(), cdf.sample_count, cdf.excluded_never_seen, cdf.clamped_negative, cdf.at(5));
  return kOk;
}

int cmd_report_buckets(const Args& args, std::ostream& out, std::ostream&) {
  Date cutoff = require_cutoff(args);
  if (args.zone_dir.empty()) throw UsageError("--zone-dir is required");
  if (!fs::is_directory(args.zone_dir)) throw UsageError("--zone-dir is not a directory: " + args.zone_dir);
  std::map<std::string, fs::path> zones;
  for (const auto& entry : fs::directory_iterator(args.zone_dir)) {
    if (!entry.is_regular_file() || entry.path().filename().string().starts_with('.')) continue;
    auto tld = canonical_tld(tld_from_file_name(entry.path()));
    if (!zones.emplace(tld, entry.path()).second) throw UsageError("two zone files for TLD " + tld);
  }
  if (zones.empty()) throw UsageError("no zone files in " + args.zone_dir);

  auto ctx = load_context(args);
  FileLock lock(ctx.config.store_dir / "LOCK", FileLock::Mode::Shared);
  store::Store store(ctx.config.store_dir);

  std::vector<analysis::TldCoverage> coverage;
  for (const auto& [tld, path] : zones) {
    auto zone = load_zone(ctx, args, path, tld, cutoff, out);
    auto r = analysis::coverage_report(zone, store.query_asof(tld, cutoff, ctx.strict));
    coverage.push_back({tld, r.total, r.covered});
  }
  auto buckets = analysis::bucket_report(coverage);
  report::write_table(args.out, "buckets", report::bucket_table(cutoff, buckets, ctx.rules.version_tag()), args.json);
  for (const auto& b : buckets.buckets) {
    out << fmt::format("10^{}: {} TLDs, median coverage {:.6f}\n", b.exponent, b.tld_count, b.median);
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Amass registered domains of ccTLDs from CT logs and Common Crawl, and report zone coverage",
               "cctld-amass"};
  app.require_subcommand(1);
  Args args;
  app.add_option("--config", args.config, "JSON config file (default: $CCTLD_AMASS_CONFIG)");
  app.add_flag("--strict", args.strict, "Reject names that match no public suffix rule");

  auto* ingest = app.add_subcommand("ingest", "Ingest observations into the store")->require_subcommand(1);
  auto* ingest_ct = ingest->add_subcommand("ct", "Scrape the configured CT logs");
  ingest_ct->add_option("--log", args.logs, "Only this log (repeatable)");
  ingest_ct->add_option("--tld", args.tld, "Keep only these TLDs (default: all)");
  auto* ingest_cc = ingest->add_subcommand("cc", "Read Common Crawl URL index files");
  ingest_cc->add_option("--snapshot", args.snapshot, "Crawl id such as CC-MAIN-2023-06")->required();
  ingest_cc->add_option("--tld", args.tld, "Keep only these TLDs (default: all)");
  ingest_cc->add_option("files", args.files, "Index files, plain or gzip");

  auto* compact = app.add_subcommand("compact", "Merge all store segments into one");

  auto* report = app.add_subcommand("report", "Write a report")->require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", args.out, "Output directory")->capture_default_str();
    sub->add_flag("--json", args.json, "Also write a JSON mirror of each CSV");
    sub->add_flag("--header", args.header, "Input files start with a header line");
  };
  auto* coverage = report->add_subcommand("coverage", "Zone coverage per source and per log");
  coverage->add_option("--cutoff", args.cutoff, "YYYY-MM-DD");
  coverage->add_option("--zone", args.zone, "Zone name list (repeatable)");
  coverage->add_option("--tld", args.tld, "TLD of each --zone (default: from the file name)");
  common(coverage);
  auto* web = report->add_subcommand("web", "A-record and web-port presence per coverage category");
  web->add_option("--cutoff", args.cutoff, "YYYY-MM-DD");
  web->add_option("--zone", args.zone, "Zone name list");
  web->add_option("--tld", args.tld, "TLD of the zone (default: from the file name)");
  web->add_option("--a-records", args.a_records, "CSV of domain,ipv4");
  web->add_option("--ports", args.ports, "CSV of ipv4,port");
  common(web);
  auto* lag = report->add_subcommand("lag", "Days from zone registration to first CT certificate");
  lag->add_option("--zone-dir", args.zone_dir, "Directory of daily zone files named YYYY-MM-DD*");
  lag->add_option("--tld", args.tld, "TLD of the zone files");
  common(lag);
  auto* buckets = report->add_subcommand("buckets", "Coverage quartiles by zone size");
  buckets->add_option("--cutoff", args.cutoff, "YYYY-MM-DD");
  buckets->add_option("--zone-dir", args.zone_dir, "Directory of zone files named <tld>.*");
  common(buckets);

  for (auto* sub : {ingest, ingest_ct, ingest_cc, compact, report, coverage, web, lag, buckets}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (ingest_ct->parsed()) return cmd_ingest_ct(args, out, err);
    if (ingest_cc->parsed()) return cmd_ingest_cc(args, out, err);
    if (compact->parsed()) return cmd_compact(args, out, err);
    if (coverage->parsed()) return cmd_report_coverage(args, out, err);
    if (web->parsed()) return cmd_report_web(args, out, err);
    if (lag->parsed()) return cmd_report_lag(args, out, err);
    if (buckets->parsed()) return cmd_report_buckets(args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kUsageError;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"cctld-amass"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace amass::cli
