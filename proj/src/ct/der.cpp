#include "der.hpp"

#include <algorithm>
#include <array>

#include "amass/ct/error.hpp"

namespace amass::der {

using ct::CtErrc;
using ct::CtError;

namespace {

constexpr std::uint8_t kSequence = 0x30;
constexpr std::uint8_t kSet = 0x31;
constexpr std::uint8_t kOid = 0x06;
constexpr std::uint8_t kInteger = 0x02;
constexpr std::uint8_t kBoolean = 0x01;
constexpr std::uint8_t kOctetString = 0x04;
constexpr std::uint8_t kUtcTime = 0x17;
constexpr std::uint8_t kGeneralizedTime = 0x18;
constexpr std::uint8_t kVersionTag = 0xA0;
constexpr std::uint8_t kExtensionsTag = 0xA3;
constexpr std::uint8_t kDnsNameTag = 0x82;

constexpr std::array<std::uint8_t, 3> kCommonNameOid{0x55, 0x04, 0x03};
constexpr std::array<std::uint8_t, 3> kSubjectAltNameOid{0x55, 0x1D, 0x11};

[[noreturn]] void malformed(const std::string& why) {
  throw CtError(CtErrc::MalformedDer, "malformed DER: " + why);
}

bool equals(Bytes a, std::span<const std::uint8_t> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Directory string types that may hold a subject CN.
std::optional<std::string> decode_string(const Tlv& tlv) {
  const auto& v = tlv.value;
  std::string out;
  switch (tlv.tag) {
    case 0x0C:  // UTF8String
    case 0x13:  // PrintableString
    case 0x16:  // IA5String
      return std::string(v.begin(), v.end());
    case 0x14:  // TeletexString, read as Latin-1
      for (auto b : v) append_utf8(out, b);
      return out;
    case 0x1E:  // BMPString
      if (v.size() % 2 != 0) malformed("odd BMPString length");
      for (std::size_t i = 0; i < v.size(); i += 2) append_utf8(out, char32_t(v[i] << 8 | v[i + 1]));
      return out;
    case 0x1C:  // UniversalString
      if (v.size() % 4 != 0) malformed("bad UniversalString length");
      for (std::size_t i = 0; i < v.size(); i += 4) {
        append_utf8(out, char32_t(v[i]) << 24 | char32_t(v[i + 1]) << 16 | char32_t(v[i + 2]) << 8 | v[i + 3]);
      }
      return out;
    default:
      return std::nullopt;
  }
}

void collect_common_names(Bytes name, std::vector<std::string>& out) {
  Reader rdns(name);
  while (!rdns.empty()) {
    Reader attrs(rdns.expect(kSet));
    while (!attrs.empty()) {
      Reader atv(attrs.expect(kSequence));
      auto oid = atv.expect(kOid);
      auto value = atv.next();
      if (equals(oid, kCommonNameOid)) {
        if (auto s = decode_string(value)) out.push_back(std::move(*s));
      }
    }
  }
}

void collect_dns_names(Bytes general_names, std::vector<std::string>& out) {
  Reader names(general_names);
  while (!names.empty()) {
    auto gn = names.next();
    if (gn.tag == kDnsNameTag) out.emplace_back(gn.value.begin(), gn.value.end());
  }
}

void collect_extensions(Bytes extensions, std::vector<std::string>& dns_names) {
  Reader exts(extensions);
  while (!exts.empty()) {
    Reader ext(exts.expect(kSequence));
    auto oid = ext.expect(kOid);
    if (ext.peek_tag() == kBoolean) ext.next();
    auto value = ext.expect(kOctetString);
    if (equals(oid, kSubjectAltNameOid)) {
      Reader inner(value);
      collect_dns_names(inner.expect(kSequence), dns_names);
    }
  }
}

TbsFields parse_tbs_body(Bytes body) {
  TbsFields out;
  Reader r(body);
  if (r.peek_tag() == kVersionTag) r.next();
  r.expect(kInteger);   // serialNumber
  r.expect(kSequence);  // signature
  r.expect(kSequence);  // issuer
  Reader validity(r.expect(kSequence));
  out.not_before = parse_time(validity.next());
  out.not_after = parse_time(validity.next());
  collect_common_names(r.expect(kSequence), out.common_names);
  r.expect(kSequence);  // subjectPublicKeyInfo
  while (!r.empty()) {
    auto field = r.next();
    if (field.tag == kExtensionsTag) {
      Reader wrapper(field.value);
      collect_extensions(wrapper.expect(kSequence), out.dns_names);
    }
  }
  return out;
}

int digits(std::string_view s, std::size_t pos, std::size_t n) {
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') malformed("non-digit in time");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

std::optional<std::uint8_t> Reader::peek_tag() const {
  if (empty()) return std::nullopt;
  return data_[pos_];
}

Tlv Reader::next() {
  if (pos_ + 2 > data_.size()) malformed("truncated TLV header");
  Tlv tlv;
  tlv.tag = data_[pos_++];
  if ((tlv.tag & 0x1F) == 0x1F) malformed("multi-byte tags are not supported");
  std::size_t len = data_[pos_++];
  if (len & 0x80) {
    std::size_t n = len & 0x7F;
    if (n == 0) malformed("indefinite length");
    if (n > 4 || pos_ + n > data_.size()) malformed("bad long-form length");
    len = 0;
    for (std::size_t i = 0; i < n; ++i) len = len << 8 | data_[pos_++];
  }
  if (len > data_.size() - pos_) malformed("length exceeds input");
  tlv.value = data_.subspan(pos_, len);
  pos_ += len;
  return tlv;
}

Bytes Reader::expect(std::uint8_t tag) {
  auto tlv = next();
  if (tlv.tag != tag) malformed("unexpected tag");
  return tlv.value;
}

TimePoint parse_time(const Tlv& tlv) {
  std::string_view s(reinterpret_cast<const char*>(tlv.value.data()), tlv.value.size());
  int year = 0;
  std::size_t pos = 0;
  if (tlv.tag == kUtcTime) {
    if (s.size() != 13 && s.size() != 11) malformed("bad UTCTime length");
    int yy = digits(s, 0, 2);
    year = yy >= 50 ? 1900 + yy : 2000 + yy;
    pos = 2;
  } else if (tlv.tag == kGeneralizedTime) {
    if (s.size() < 15) malformed("bad GeneralizedTime length");
    year = digits(s, 0, 4);
    pos = 4;
  } else {
    malformed("expected a time value");
  }
  if (s.back() != 'Z') malformed("time not in UTC");
  int month = digits(s, pos, 2);
  int day = digits(s, pos + 2, 2);
  int hour = digits(s, pos + 4, 2);
  int minute = digits(s, pos + 6, 2);
  std::size_t after = pos + 8;
  int second = 0;
  if (after + 1 < s.size()) {
    second = digits(s, after, 2);
    after += 2;
  }
  // Optional fractional seconds in GeneralizedTime are dropped.
  if (tlv.tag == kGeneralizedTime && after < s.size() - 1) {
    if (s[after] != '.') malformed("bad GeneralizedTime");
    digits(s, after + 1, s.size() - 1 - (after + 1));
  } else if (after != s.size() - 1) {
    malformed("trailing characters in time");
  }
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)}, std::chrono::day{unsigned(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) malformed("time out of range");
  return TimePoint{sys_days{ymd}} + hours{hour} + minutes{minute} + seconds{second};
}

TbsFields parse_certificate(Bytes der) {
  Reader outer(der);
  Reader cert(outer.expect(kSequence));
  return parse_tbs_body(cert.expect(kSequence));
}

TbsFields parse_tbs_certificate(Bytes der) {
  Reader outer(der);
  return parse_tbs_body(outer.expect(kSequence));
}

}  // namespace amass::der
