#include "amass/store.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <queue>

#include <fmt/format.h>

#include "amass/io.hpp"

namespace amass::store {

namespace fs = std::filesystem;

namespace {

// Segments merged in one pass; bounds the number of open files.
constexpr std::size_t kMaxFanIn = 128;

[[noreturn]] void rethrow_io(const IoError& e) {
  if (e.error_number() == ENOSPC || e.error_number() == EDQUOT) {
    throw StoreError(StoreErrc::StorageFull, e.what());
  }
  throw StoreError(StoreErrc::IoError, e.what());
}

std::string encode_key(const ProvenanceKey& k) {
  std::string out;
  out.reserve(k.domain.size() + k.origin.size() + 4);
  out += k.domain;
  out += '\t';
  out += to_string(k.source);
  out += '\t';
  out += k.origin;
  return out;
}

void validate_key(const ProvenanceKey& k) {
  auto bad = [](const std::string& s) { return s.empty() || s.find_first_of("\t\r\n") != std::string::npos; };
  if (bad(k.domain) || bad(k.origin)) {
    throw StoreError(StoreErrc::InvalidRecord, "record key fields must be non-empty and free of tabs/newlines");
  }
}

bool under_tld(std::string_view domain, std::string_view tld) {
  return domain.size() > tld.size() + 1 && domain.ends_with(tld) && domain[domain.size() - tld.size() - 1] == '.';
}

class SegmentReader {
 public:
  explicit SegmentReader(const fs::path& path) : path_(path), in_(path) { advance(); }

  const std::optional<Record>& current() const { return current_; }

  void advance() {
    if (!in_.next(line_)) {
      current_.reset();
      return;
    }
    Record r;
    try {
      r = parse_record(line_);
    } catch (const StoreError& e) {
      throw StoreError(StoreErrc::CorruptSegment, path_.string() + ": " + e.what());
    }
    if (current_ && !(current_->key < r.key)) {
      throw StoreError(StoreErrc::CorruptSegment, path_.string() + ": records out of order at '" + line_ + "'");
    }
    current_ = std::move(r);
  }

 private:
  fs::path path_;
  LineReader in_;
  std::string line_;
  std::optional<Record> current_;
};

void merge_segments(const std::vector<SegmentInfo>& segments, const std::function<void(const Record&)>& visit) {
  std::vector<SegmentReader> readers;
  readers.reserve(segments.size());
  try {
    for (const auto& s : segments) readers.emplace_back(s.path);
  } catch (const IoError& e) {
    rethrow_io(e);
  }
  auto greater = [&](std::size_t a, std::size_t b) { return readers[b].current()->key < readers[a].current()->key; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(greater)> heap(greater);
  for (std::size_t i = 0; i < readers.size(); ++i) {
    if (readers[i].current()) heap.push(i);
  }
  while (!heap.empty()) {
    std::size_t i = heap.top();
    heap.pop();
    Record merged = *readers[i].current();
    readers[i].advance();
    if (readers[i].current()) heap.push(i);
    while (!heap.empty() && readers[heap.top()].current()->key == merged.key) {
      std::size_t j = heap.top();
      heap.pop();
      merged.value.merge(readers[j].current()->value);
      readers[j].advance();
      if (readers[j].current()) heap.push(j);
    }
    visit(merged);
  }
}

}  // namespace

std::string_view to_string(Source s) { return s == Source::CT ? "CT" : "CC"; }

Record from_observation(const ct::CertObservation& obs) {
  return Record{{std::string(obs.domain.str()), Source::CT, obs.log_name}, {obs.not_before, obs.not_after}};
}

Record from_observation(const cc::CrawlObservation& obs) {
  auto day = start_of(obs.snapshot.derived_date());
  return Record{{std::string(obs.domain.str()), Source::CC, obs.snapshot.raw_id()}, {day, day}};
}

std::string format_record(const Record& r) {
  return encode_key(r.key) + '\t' + format_rfc3339(r.value.min_start) + '\t' + format_rfc3339(r.value.max_end);
}

Record parse_record(std::string_view line) {
  auto corrupt = [&](const char* why) {
    return StoreError(StoreErrc::CorruptSegment, std::string(why) + ": '" + std::string(line) + "'");
  };
  if (std::count(line.begin(), line.end(), '\t') != 4) throw corrupt("expected 5 fields");
  std::string_view fields[5];
  std::size_t pos = 0;
  for (auto& f : fields) {
    auto tab = line.find('\t', pos);
    f = line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos);
    pos = tab + 1;
  }
  Record r;
  r.key.domain = std::string(fields[0]);
  if (fields[1] == "CT") {
    r.key.source = Source::CT;
  } else if (fields[1] == "CC") {
    r.key.source = Source::CC;
  } else {
    throw corrupt("unknown source");
  }
  r.key.origin = std::string(fields[2]);
  auto start = parse_rfc3339(fields[3]);
  auto end = parse_rfc3339(fields[4]);
  if (!start || !end) throw corrupt("bad timestamp");
  if (r.key.domain.empty() || r.key.origin.empty()) throw corrupt("empty key field");
  if (*end < *start) throw corrupt("min_start after max_end");
  r.value = {*start, *end};
  return r;
}

bool contains(const NameSet& set, std::string_view name) {
  return std::binary_search(set.begin(), set.end(), name, std::less<>{});
}

Store::Store(fs::path dir, StoreOptions options) : dir_(std::move(dir)), options_(options) {
  try {
    fs::create_directories(dir_ / "segments");
  } catch (const fs::filesystem_error& e) {
    throw StoreError(StoreErrc::IoError, e.what());
  }
  for (const auto& entry : fs::directory_iterator(dir_ / "segments")) {
    auto name = entry.path().filename().string();
    std::uint64_t id = 0;
    auto [p, ec] = std::from_chars(name.data(), name.data() + name.size(), id);
    if (ec == std::errc{} && p != name.data()) next_id_ = std::max(next_id_, id + 1);
  }
}

std::vector<SegmentInfo> Store::load_manifest() const {
  std::vector<SegmentInfo> out;
  auto path = dir_ / "MANIFEST";
  if (!fs::exists(path)) return out;
  std::string content;
  try {
    content = read_file(path);
  } catch (const IoError& e) {
    rethrow_io(e);
  }
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    std::string_view line = std::string_view(content).substr(pos, nl - pos);
    pos = nl == std::string::npos ? content.size() : nl + 1;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    SegmentInfo info;
    info.path = dir_ / "segments" / std::string(line.substr(0, tab));
    if (tab != std::string_view::npos) {
      auto count = line.substr(tab + 1);
      std::from_chars(count.data(), count.data() + count.size(), info.record_count);
    }
    out.push_back(std::move(info));
  }
  return out;
}

void Store::write_manifest(const std::vector<SegmentInfo>& segments) const {
  std::string content;
  for (const auto& s : segments) content += fmt::format("{}\t{}\n", s.path.filename().string(), s.record_count);
  try {
    write_file_atomic(dir_ / "MANIFEST", content);
  } catch (const IoError& e) {
    rethrow_io(e);
  }
}

fs::path Store::next_segment_path() {
  return dir_ / "segments" / fmt::format("{:04d}.seg{}", next_id_++, options_.gzip_segments ? ".gz" : "");
}

SegmentInfo Store::write_segment(std::string_view content, std::uint64_t count) {
  SegmentInfo info{next_segment_path(), count, true};
  try {
    write_file_atomic(info.path, content, options_.gzip_segments);
  } catch (const IoError& e) {
    rethrow_io(e);
  }
  return info;
}

void Store::append(const Record& record) {
  validate_key(record.key);
  if (record.value.max_end < record.value.min_start) {
    throw StoreError(StoreErrc::InvalidRecord, "min_start after max_end for " + record.key.domain);
  }
  std::lock_guard lock(mutex_);
  auto [it, inserted] = buffer_.try_emplace(encode_key(record.key), record.value);
  if (!inserted) it->second.merge(record.value);
  if (buffer_.size() >= options_.flush_threshold) flush_locked();
}

void Store::append(const ct::CertObservation& obs) { append(from_observation(obs)); }

void Store::append(const cc::CrawlObservation& obs) { append(from_observation(obs)); }

void Store::append(std::span<const ct::CertObservation> batch) {
  for (const auto& obs : batch) append(from_observation(obs));
}

void Store::flush() {
  std::lock_guard lock(mutex_);
  flush_locked();
}

void Store::flush_locked() {
  if (buffer_.empty()) return;
  std::vector<std::pair<std::string, ProvenanceValue>> rows(std::make_move_iterator(buffer_.begin()),
                                                            std::make_move_iterator(buffer_.end()));
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string content;
  content.reserve(rows.size() * 64);
  for (const auto& [key, value] : rows) {
    content += key;
    content += '\t';
    content += format_rfc3339(value.min_start);
    content += '\t';
    content += format_rfc3339(value.max_end);
    content += '\n';
  }
  auto info = write_segment(content, rows.size());
  auto live = load_manifest();
  live.push_back(info);
  write_manifest(live);
  buffer_.clear();
}

std::optional<SegmentInfo> Store::compact() {
  std::lock_guard lock(mutex_);
  auto live = load_manifest();
  if (live.empty()) return std::nullopt;
  while (live.size() > 1) {
    std::size_t take = std::min(live.size(), kMaxFanIn);
    std::vector<SegmentInfo> inputs(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(take));
    std::string content;
    std::uint64_t count = 0;
    merge_segments(inputs, [&](const Record& r) {
      content += format_record(r);
      content += '\n';
      ++count;
    });
    auto output = write_segment(content, count);
    std::vector<SegmentInfo> next{output};
    next.insert(next.end(), live.begin() + static_cast<std::ptrdiff_t>(take), live.end());
    write_manifest(next);
    for (const auto& in : inputs) {
      std::error_code ec;
      fs::remove(in.path, ec);
    }
    live = std::move(next);
  }
  // Leftovers of interrupted flushes or compactions.
  for (const auto& entry : fs::directory_iterator(dir_ / "segments")) {
    if (entry.path() != live.front().path) {
      std::error_code ec;
      fs::remove(entry.path(), ec);
    }
  }
  return live.front();
}

std::vector<SegmentInfo> Store::segments() const {
  std::lock_guard lock(mutex_);
  return load_manifest();
}

std::size_t Store::buffered() const {
  std::lock_guard lock(mutex_);
  return buffer_.size();
}

void Store::scan(const std::function<void(const Record&)>& visit) const {
  auto live = segments();
  if (live.size() > kMaxFanIn) {
    throw StoreError(StoreErrc::IoError,
                     fmt::format("store has {} segments; compact it before querying", live.size()));
  }
  merge_segments(live, visit);
}

AsOfView Store::query_asof(std::string_view tld, Date cutoff, bool strict) const {
  AsOfView view;
  view.tld = std::string(tld);
  view.cutoff = cutoff;
  const TimePoint limit = start_of(cutoff);

  bool any_under_tld = false;
  std::string domain;
  bool in_ct = false;
  bool in_cc = false;
  TimePoint ct_max_end = TimePoint::min();
  auto finish = [&] {
    if (domain.empty()) return;
    if (in_ct) {
      view.ct_names.push_back(domain);
      if (ct_max_end < limit) view.expired_only_names.push_back(domain);
    }
    if (in_cc) view.cc_names.push_back(domain);
  };

  scan([&](const Record& r) {
    if (!under_tld(r.key.domain, tld)) return;
    any_under_tld = true;
    if (r.key.domain != domain) {
      finish();
      domain = r.key.domain;
      in_ct = in_cc = false;
      ct_max_end = TimePoint::min();
    }
    bool before = r.value.min_start < limit;
    if (r.key.source == Source::CT) {
      ct_max_end = std::max(ct_max_end, r.value.max_end);
      if (before) {
        in_ct = true;
        view.per_log_names[r.key.origin].push_back(domain);
      }
    } else if (before) {
      in_cc = true;
    }
  });
  finish();

  if (strict && !any_under_tld) {
    throw StoreError(StoreErrc::UnknownTld, "no records under TLD '" + std::string(tld) + "'");
  }
  return view;
}

std::map<std::string, TimePoint> Store::first_ct_seen(std::string_view tld) const {
  std::map<std::string, TimePoint> out;
  scan([&](const Record& r) {
    if (r.key.source != Source::CT || !under_tld(r.key.domain, tld)) return;
    auto [it, inserted] = out.try_emplace(r.key.domain, r.value.min_start);
    if (!inserted && r.value.min_start < it->second) it->second = r.value.min_start;
  });
  return out;
}

}  // namespace amass::store
