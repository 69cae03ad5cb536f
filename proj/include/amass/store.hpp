#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amass/cc.hpp"
#include "amass/ct/ingest.hpp"
#include "amass/time.hpp"

namespace amass::store {

// Declared in on-disk sort order ("CC" < "CT").
enum class Source : std::uint8_t { CC, CT };

std::string_view to_string(Source s);

enum class StoreErrc { IoError, StorageFull, CorruptSegment, UnknownTld, InvalidRecord };

class StoreError : public std::runtime_error {
 public:
  StoreError(StoreErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  StoreErrc code() const noexcept { return code_; }

 private:
  StoreErrc code_;
};

/// Identifies one line of provenance: a registered domain seen by one source
/// in one origin (a CT log name or a crawl snapshot id).
struct ProvenanceKey {
  std::string domain;
  Source source = Source::CT;
  std::string origin;
  friend auto operator<=>(const ProvenanceKey&, const ProvenanceKey&) = default;
  friend bool operator==(const ProvenanceKey&, const ProvenanceKey&) = default;
};

/// Earliest start and latest end of the evidence behind a key. For crawl
/// evidence both are snapshot dates.
struct ProvenanceValue {
  TimePoint min_start;
  TimePoint max_end;
  void merge(const ProvenanceValue& other) noexcept {
    if (other.min_start < min_start) min_start = other.min_start;
    if (other.max_end > max_end) max_end = other.max_end;
  }
  friend bool operator==(const ProvenanceValue&, const ProvenanceValue&) = default;
};

struct Record {
  ProvenanceKey key;
  ProvenanceValue value;
  friend bool operator==(const Record&, const Record&) = default;
};

Record from_observation(const ct::CertObservation& obs);
Record from_observation(const cc::CrawlObservation& obs);

/// `domain\tsource\torigin\tmin_start\tmax_end`, no newline.
std::string format_record(const Record& r);
/// Throws StoreError(CorruptSegment).
Record parse_record(std::string_view line);

struct SegmentInfo {
  std::filesystem::path path;
  std::uint64_t record_count = 0;
  bool sorted = true;
};

/// Sorted, duplicate-free list of registered domain names.
using NameSet = std::vector<std::string>;

bool contains(const NameSet& set, std::string_view name);

/// The dataset as it stood strictly before 00:00 UTC on the cut-off date.
struct AsOfView {
  std::string tld;
  Date cutoff;
  NameSet ct_names;
  NameSet cc_names;
  std::map<std::string, NameSet> per_log_names;
  /// Names in ct_names whose latest certificate expiry (over every log) is before the cut-off.
  NameSet expired_only_names;
};

struct StoreOptions {
  /// Buffered distinct keys that trigger an automatic flush.
  std::size_t flush_threshold = 1u << 18;
  bool gzip_segments = false;
};

/// Append-only consolidated dataset in a directory:
///   MANIFEST          live segment files, one `name\trecord_count` per line
///   segments/NNNN.seg sorted record files
/// Appends are buffered in memory and become visible to queries after flush().
class Store final : public ct::CertSink {
 public:
  explicit Store(std::filesystem::path dir, StoreOptions options = {});
  ~Store() override = default;
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const std::filesystem::path& dir() const noexcept { return dir_; }

  void append(const ct::CertObservation& obs);
  void append(const cc::CrawlObservation& obs);
  void append(std::span<const ct::CertObservation> batch) override;
  void append(const Record& record);

  /// Writes the buffer as a new durable segment. No-op when the buffer is empty.
  void flush() override;

  /// Merges every live segment into one. Inputs are deleted only after the
  /// output and the new manifest are durable. Returns nullopt for an empty store.
  std::optional<SegmentInfo> compact();

  std::vector<SegmentInfo> segments() const;
  std::size_t buffered() const;

  /// Visits every durable record in key order with duplicate keys merged.
  void scan(const std::function<void(const Record&)>& visit) const;

  /// Throws StoreError(UnknownTld) in strict mode when no record is under `tld`.
  AsOfView query_asof(std::string_view tld, Date cutoff, bool strict = false) const;

  /// Earliest certificate validity start per domain under `tld`.
  std::map<std::string, TimePoint> first_ct_seen(std::string_view tld) const;

 private:
  std::vector<SegmentInfo> load_manifest() const;
  void write_manifest(const std::vector<SegmentInfo>& segments) const;
  std::filesystem::path next_segment_path();
  SegmentInfo write_segment(std::string_view content, std::uint64_t count);
  void flush_locked();

  std::filesystem::path dir_;
  StoreOptions options_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, ProvenanceValue> buffer_;
  std::uint64_t next_id_ = 1;
};

}  // namespace amass::store
