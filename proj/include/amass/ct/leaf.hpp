#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amass/ct/error.hpp"
#include "amass/time.hpp"

namespace amass::ct {

enum class EntryKind { X509, Precert };

std::string_view to_string(EntryKind kind);

/// One element of a get-entries response, still base64-encoded.
struct RawEntry {
  std::string leaf_input;
  std::string extra_data;
};

struct CertificateInfo {
  EntryKind kind = EntryKind::X509;
  /// Subject CNs that parse as domain names, then SAN dNSNames; duplicates removed.
  std::vector<std::string> names;
  TimePoint not_before;
  TimePoint not_after;
  std::uint64_t log_timestamp_ms = 0;
};

/// Decodes the MerkleTreeLeaf of a log entry and the certificate inside it.
/// Throws CtError with MalformedLeaf or MalformedDer.
CertificateInfo parse_entry(const RawEntry& entry);

/// Same, for an already-decoded MerkleTreeLeaf.
CertificateInfo parse_leaf(std::span<const std::uint8_t> leaf);

std::vector<std::uint8_t> base64_decode(std::string_view text);
std::string base64_encode(std::span<const std::uint8_t> data);

}  // namespace amass::ct
