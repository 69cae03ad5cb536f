#include "amass/ct/leaf.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "amass/domain.hpp"
#include "der.hpp"

namespace amass::ct {

std::string_view to_string(CtErrc code) {
  switch (code) {
    case CtErrc::HttpError: return "HttpError";
    case CtErrc::MalformedResponse: return "MalformedResponse";
    case CtErrc::RangeBeyondTree: return "RangeBeyondTree";
    case CtErrc::TreeShrank: return "TreeShrank";
    case CtErrc::MalformedLeaf: return "MalformedLeaf";
    case CtErrc::MalformedDer: return "MalformedDer";
    case CtErrc::InvalidLog: return "InvalidLog";
    case CtErrc::CheckpointMismatch: return "CheckpointMismatch";
  }
  return "Unknown";
}

std::string_view to_string(EntryKind kind) {
  return kind == EntryKind::X509 ? "x509" : "precert";
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::vector<std::uint8_t> out(text.size() / 4 * 3 + 3);
  EVP_ENCODE_CTX* ctx = EVP_ENCODE_CTX_new();
  EVP_DecodeInit(ctx);
  int len = 0;
  int tail = 0;
  int rc = EVP_DecodeUpdate(ctx, out.data(), &len, reinterpret_cast<const unsigned char*>(text.data()),
                            static_cast<int>(text.size()));
  bool ok = rc >= 0 && EVP_DecodeFinal(ctx, out.data() + len, &tail) == 1;
  EVP_ENCODE_CTX_free(ctx);
  if (!ok) throw CtError(CtErrc::MalformedLeaf, "invalid base64");
  out.resize(static_cast<std::size_t>(len + tail));
  return out;
}

std::string base64_encode(std::span<const std::uint8_t> data) {
  std::string out(4 * ((data.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(), static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

namespace {

// Big-endian cursor over the TLS-encoded MerkleTreeLeaf structure.
class LeafCursor {
 public:
  explicit LeafCursor(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint64_t uint(std::size_t width) {
    need(width);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v = v << 8 | data_[pos_++];
    return v;
  }

  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw CtError(CtErrc::MalformedLeaf, "truncated MerkleTreeLeaf");
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

constexpr std::uint64_t kLeafVersionV1 = 0;
constexpr std::uint64_t kTimestampedEntry = 0;
constexpr std::uint64_t kX509Entry = 0;
constexpr std::uint64_t kPrecertEntry = 1;
constexpr std::size_t kIssuerKeyHashLength = 32;

bool parses_as_domain(const std::string& s) {
  try {
    DomainName::parse(s);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace

CertificateInfo parse_leaf(std::span<const std::uint8_t> leaf) {
  LeafCursor cur(leaf);
  if (cur.uint(1) != kLeafVersionV1) throw CtError(CtErrc::MalformedLeaf, "unknown leaf version");
  if (cur.uint(1) != kTimestampedEntry) throw CtError(CtErrc::MalformedLeaf, "unknown leaf type");

  CertificateInfo info;
  info.log_timestamp_ms = cur.uint(8);
  auto entry_type = cur.uint(2);
  der::TbsFields fields;
  if (entry_type == kX509Entry) {
    info.kind = EntryKind::X509;
    auto cert = cur.bytes(cur.uint(3));
    fields = der::parse_certificate(cert);
  } else if (entry_type == kPrecertEntry) {
    info.kind = EntryKind::Precert;
    cur.bytes(kIssuerKeyHashLength);
    auto tbs = cur.bytes(cur.uint(3));
    fields = der::parse_tbs_certificate(tbs);
  } else {
    throw CtError(CtErrc::MalformedLeaf, "unknown entry type " + std::to_string(entry_type));
  }
  cur.bytes(cur.uint(2));  // CtExtensions
  if (!cur.at_end()) throw CtError(CtErrc::MalformedLeaf, "trailing bytes after MerkleTreeLeaf");

  if (fields.not_before > fields.not_after) {
    throw CtError(CtErrc::MalformedDer, "certificate notBefore is after notAfter");
  }
  info.not_before = fields.not_before;
  info.not_after = fields.not_after;

  auto add = [&](std::string name) {
    if (std::find(info.names.begin(), info.names.end(), name) == info.names.end()) {
      info.names.push_back(std::move(name));
    }
  };
  for (auto& cn : fields.common_names) {
    if (parses_as_domain(cn)) add(std::move(cn));
  }
  for (auto& dns : fields.dns_names) add(std::move(dns));
  return info;
}

CertificateInfo parse_entry(const RawEntry& entry) {
  auto leaf = base64_decode(entry.leaf_input);
  return parse_leaf(leaf);
}

}  // namespace amass::ct
