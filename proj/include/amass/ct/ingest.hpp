#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "amass/ct/client.hpp"
#include "amass/ct/leaf.hpp"
#include "amass/domain.hpp"

namespace amass::ct {

/// Evidence that `domain` appeared in a certificate logged at `entry_index`.
struct CertObservation {
  RegisteredDomain domain;
  std::string log_name;
  TimePoint not_before;
  TimePoint not_after;
  std::uint64_t entry_index = 0;
  EntryKind kind = EntryKind::X509;
};

struct ExtractResult {
  std::vector<CertObservation> observations;
  std::size_t skipped_names = 0;
};

/// Maps every name of a certificate to its registered domain. Names that are
/// not domains (IP literals, public suffixes, junk) are counted, not thrown.
/// Each registered domain appears at most once per certificate.
ExtractResult extract_observations(const CertificateInfo& info, const CtLogDescriptor& log,
                                   std::uint64_t index, const SuffixRuleSet& rules,
                                   SuffixPolicy policy = SuffixPolicy::Lenient);

/// Receives observations from ingestion workers. Implementations must accept
/// concurrent calls from several workers.
class CertSink {
 public:
  virtual ~CertSink() = default;
  virtual void append(std::span<const CertObservation> batch) = 0;
  /// Makes everything appended so far durable.
  virtual void flush() = 0;
};

struct IngestCheckpoint {
  std::string log_name;
  std::uint64_t next_index = 0;
  std::uint64_t sth_size_at_checkpoint = 0;
  friend bool operator==(const IngestCheckpoint&, const IngestCheckpoint&) = default;
};

/// `log_name\tnext_index\tsth_size` followed by a newline.
std::string format_checkpoint(const IngestCheckpoint& cp);
IngestCheckpoint parse_checkpoint(std::string_view line);
/// Returns a fresh checkpoint when the file does not exist.
IngestCheckpoint load_checkpoint(const std::filesystem::path& path, const std::string& log_name);
void save_checkpoint(const std::filesystem::path& path, const IngestCheckpoint& cp);

struct IngestStats {
  std::uint64_t entries_fetched = 0;
  std::uint64_t certificates = 0;
  std::uint64_t malformed_leaf = 0;
  std::uint64_t malformed_der = 0;
  std::uint64_t names_skipped = 0;
  std::uint64_t observations = 0;
  std::uint64_t pages = 0;
};

enum class IngestStage {
  /// The page's observations were handed to the sink and flushed.
  PageFlushed,
  /// The checkpoint covering the page was persisted.
  CheckpointSaved,
};

struct IngestOptions {
  std::uint64_t page_size = 256;
  SuffixPolicy policy = SuffixPolicy::Lenient;
  /// Where the checkpoint is persisted after every page; empty disables persistence.
  std::filesystem::path checkpoint_path;
  /// Called after each stage of each page; used for progress and fault injection.
  std::function<void(IngestStage, const IngestCheckpoint&, const IngestStats&)> on_stage;
};

/// Streams entries [checkpoint.next_index, tree_size) into `sink` page by page
/// and returns the advanced checkpoint. The sink is flushed before each
/// checkpoint is written, so a crash re-ingests at most one page.
IngestCheckpoint run_ingest(CtLogClient& client, IngestCheckpoint checkpoint, CertSink& sink,
                            const SuffixRuleSet& rules, const IngestOptions& options, IngestStats& stats);

}  // namespace amass::ct
