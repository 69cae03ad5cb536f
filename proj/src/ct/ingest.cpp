#include "amass/ct/ingest.hpp"

#include <charconv>

#include "amass/io.hpp"

namespace amass::ct {

ExtractResult extract_observations(const CertificateInfo& info, const CtLogDescriptor& log,
                                   std::uint64_t index, const SuffixRuleSet& rules, SuffixPolicy policy) {
  ExtractResult out;
  for (const auto& raw : info.names) {
    try {
      auto reg = rules.registered_domain(DomainName::parse(raw), policy);
      bool seen = false;
      for (const auto& o : out.observations) {
        if (o.domain == reg) {
          seen = true;
          break;
        }
      }
      if (!seen) {
        out.observations.push_back({std::move(reg), log.name, info.not_before, info.not_after, index, info.kind});
      }
    } catch (const DomainError&) {
      ++out.skipped_names;
    }
  }
  return out;
}

std::string format_checkpoint(const IngestCheckpoint& cp) {
  return cp.log_name + "\t" + std::to_string(cp.next_index) + "\t" + std::to_string(cp.sth_size_at_checkpoint) +
         "\n";
}

IngestCheckpoint parse_checkpoint(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  auto t1 = line.find('\t');
  auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
  if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
    throw CtError(CtErrc::CheckpointMismatch, "malformed checkpoint line");
  }
  IngestCheckpoint cp;
  cp.log_name = std::string(line.substr(0, t1));
  auto num = [&](std::string_view s, std::uint64_t& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
      throw CtError(CtErrc::CheckpointMismatch, "malformed checkpoint number");
    }
  };
  num(line.substr(t1 + 1, t2 - t1 - 1), cp.next_index);
  num(line.substr(t2 + 1), cp.sth_size_at_checkpoint);
  if (cp.log_name.empty() || cp.next_index > cp.sth_size_at_checkpoint) {
    throw CtError(CtErrc::CheckpointMismatch, "checkpoint violates next_index <= sth_size");
  }
  return cp;
}

IngestCheckpoint load_checkpoint(const std::filesystem::path& path, const std::string& log_name) {
  if (!std::filesystem::exists(path)) return IngestCheckpoint{log_name, 0, 0};
  auto cp = parse_checkpoint(read_file(path));
  if (cp.log_name != log_name) {
    throw CtError(CtErrc::CheckpointMismatch,
                  "checkpoint " + path.string() + " belongs to log '" + cp.log_name + "'");
  }
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const IngestCheckpoint& cp) {
  write_file_atomic(path, format_checkpoint(cp));
}

IngestCheckpoint run_ingest(CtLogClient& client, IngestCheckpoint checkpoint, CertSink& sink,
                            const SuffixRuleSet& rules, const IngestOptions& options, IngestStats& stats) {
  const auto& log = client.log();
  if (checkpoint.log_name != log.name) {
    throw CtError(CtErrc::CheckpointMismatch, "checkpoint is for log '" + checkpoint.log_name + "'");
  }
  auto sth = client.fetch_sth();
  if (sth.tree_size < checkpoint.sth_size_at_checkpoint) {
    throw CtError(CtErrc::TreeShrank, "log '" + log.name + "' shrank from " +
                                          std::to_string(checkpoint.sth_size_at_checkpoint) + " to " +
                                          std::to_string(sth.tree_size) + " entries");
  }
  const std::uint64_t page = options.page_size == 0 ? 1 : options.page_size;

  std::vector<CertObservation> batch;
  while (checkpoint.next_index < sth.tree_size) {
    std::uint64_t start = checkpoint.next_index;
    std::uint64_t end = std::min(sth.tree_size, start + page) - 1;
    auto entries = client.fetch_entries(start, end);

    batch.clear();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      ++stats.entries_fetched;
      try {
        auto info = parse_entry(entries[i]);
        ++stats.certificates;
        auto extracted = extract_observations(info, log, start + i, rules, options.policy);
        stats.names_skipped += extracted.skipped_names;
        for (auto& o : extracted.observations) batch.push_back(std::move(o));
      } catch (const CtError& e) {
        if (e.code() == CtErrc::MalformedLeaf) {
          ++stats.malformed_leaf;
        } else if (e.code() == CtErrc::MalformedDer) {
          ++stats.malformed_der;
        } else {
          throw;
        }
      }
    }
    stats.observations += batch.size();
    ++stats.pages;
    sink.append(batch);
    sink.flush();

    IngestCheckpoint next{log.name, end + 1, sth.tree_size};
    if (options.on_stage) options.on_stage(IngestStage::PageFlushed, next, stats);
    if (!options.checkpoint_path.empty()) save_checkpoint(options.checkpoint_path, next);
    checkpoint = next;
    if (options.on_stage) options.on_stage(IngestStage::CheckpointSaved, checkpoint, stats);
  }
  return checkpoint;
}

}  // namespace amass::ct
