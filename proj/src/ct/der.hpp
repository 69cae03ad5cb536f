#pragma once

// Minimal DER reader for the parts of X.509 that carry names and validity.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amass/time.hpp"

namespace amass::der {

using Bytes = std::span<const std::uint8_t>;

struct Tlv {
  std::uint8_t tag = 0;
  Bytes value;
};

/// Sequential reader over concatenated TLVs. Throws CtError(MalformedDer).
class Reader {
 public:
  explicit Reader(Bytes data) : data_(data) {}
  bool empty() const noexcept { return pos_ >= data_.size(); }
  std::optional<std::uint8_t> peek_tag() const;
  Tlv next();
  /// Reads the next TLV and requires the given tag.
  Bytes expect(std::uint8_t tag);

 private:
  Bytes data_;
  std::size_t pos_ = 0;
};

struct TbsFields {
  TimePoint not_before;
  TimePoint not_after;
  std::vector<std::string> common_names;
  std::vector<std::string> dns_names;
};

/// Parses a DER Certificate and returns the fields of its TBSCertificate.
TbsFields parse_certificate(Bytes der);
/// Parses a bare DER TBSCertificate (as found in precertificate leaves).
TbsFields parse_tbs_certificate(Bytes der);

/// Decodes UTCTime (tag 0x17) or GeneralizedTime (tag 0x18).
TimePoint parse_time(const Tlv& tlv);

}  // namespace amass::der
