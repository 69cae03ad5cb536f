#include "amass/domain.hpp"

#include <arpa/inet.h>
#include <unicode/uidna.h>

#include <algorithm>
#include <array>
#include <tuple>

namespace amass {

std::string_view to_string(DomainErrc code) {
  switch (code) {
    case DomainErrc::NotADomain: return "NotADomain";
    case DomainErrc::LabelSyntax: return "LabelSyntax";
    case DomainErrc::IdnaFailure: return "IdnaFailure";
    case DomainErrc::IsPublicSuffix: return "IsPublicSuffix";
    case DomainErrc::NoMatchingRule: return "NoMatchingRule";
    case DomainErrc::MalformedRule: return "MalformedRule";
  }
  return "Unknown";
}

namespace {

constexpr std::size_t kMaxNameLength = 253;
constexpr std::size_t kMaxLabelLength = 63;

// ICU always runs the hyphen checks; LDH rules are applied separately below.
constexpr uint32_t kIgnoredIdnaErrors = UIDNA_ERROR_HYPHEN_3_4 | UIDNA_ERROR_LEADING_HYPHEN |
                                        UIDNA_ERROR_TRAILING_HYPHEN | UIDNA_ERROR_EMPTY_LABEL;

const UIDNA* uts46() {
  static const UIDNA* instance = [] {
    UErrorCode ec = U_ZERO_ERROR;
    UIDNA* idna = uidna_openUTS46(
        UIDNA_NONTRANSITIONAL_TO_ASCII | UIDNA_NONTRANSITIONAL_TO_UNICODE | UIDNA_CHECK_BIDI |
            UIDNA_CHECK_CONTEXTJ,
        &ec);
    if (U_FAILURE(ec)) throw DomainError(DomainErrc::IdnaFailure, "cannot initialise ICU UTS #46");
    return idna;
  }();
  return instance;
}

enum class IdnaDirection { ToAscii, ToUnicode };

// Returns false if ICU reports a conversion error.
bool icu_convert(std::string_view in, IdnaDirection dir, bool whole_name, std::string& out) {
  UErrorCode ec = U_ZERO_ERROR;
  UIDNAInfo info = UIDNA_INFO_INITIALIZER;
  std::array<char, 1024> buf{};
  auto len = static_cast<int32_t>(in.size());
  int32_t n = 0;
  if (dir == IdnaDirection::ToAscii) {
    n = whole_name ? uidna_nameToASCII_UTF8(uts46(), in.data(), len, buf.data(), buf.size(), &info, &ec)
                   : uidna_labelToASCII_UTF8(uts46(), in.data(), len, buf.data(), buf.size(), &info, &ec);
  } else {
    n = whole_name ? uidna_nameToUnicodeUTF8(uts46(), in.data(), len, buf.data(), buf.size(), &info, &ec)
                   : uidna_labelToUnicodeUTF8(uts46(), in.data(), len, buf.data(), buf.size(), &info, &ec);
  }
  if (U_FAILURE(ec) || (info.errors & ~kIgnoredIdnaErrors) != 0) return false;
  out.assign(buf.data(), static_cast<std::size_t>(n));
  return true;
}

bool is_ldh(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

bool is_ipv4_literal(const std::string& s) {
  in_addr addr{};
  return ::inet_pton(AF_INET, s.c_str(), &addr) == 1;
}

void check_label(std::string_view label, std::string_view whole) {
  if (label.empty()) throw DomainError(DomainErrc::LabelSyntax, "empty label in '" + std::string(whole) + "'");
  if (label.size() > kMaxLabelLength) {
    throw DomainError(DomainErrc::LabelSyntax, "label longer than 63 octets in '" + std::string(whole) + "'");
  }
  if (!std::all_of(label.begin(), label.end(), is_ldh)) {
    throw DomainError(DomainErrc::LabelSyntax, "invalid character in '" + std::string(whole) + "'");
  }
  if (label.front() == '-' || label.back() == '-') {
    throw DomainError(DomainErrc::LabelSyntax, "label starts or ends with '-' in '" + std::string(whole) + "'");
  }
  if (label.size() > 4 && label.substr(0, 4) == "xn--") {
    std::string unicode;
    if (!icu_convert(label, IdnaDirection::ToUnicode, false, unicode)) {
      throw DomainError(DomainErrc::IdnaFailure, "invalid A-label '" + std::string(label) + "'");
    }
  }
}

}  // namespace

std::string canonical_ascii(std::string_view name) {
  if (name.empty()) throw DomainError(DomainErrc::NotADomain, "empty name");
  for (unsigned char c : name) {
    if (c <= 0x20 || c == 0x7f || c == '@' || c == ':' || c == '/' || c == '\\' || c == '[' ||
        c == ']' || c == '?' || c == '#') {
      throw DomainError(DomainErrc::NotADomain, "not a domain name: '" + std::string(name) + "'");
    }
  }
  bool ascii = std::all_of(name.begin(), name.end(), [](unsigned char c) { return c < 0x80; });
  std::string out;
  if (ascii) {
    out.assign(name);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c); });
  } else if (!icu_convert(name, IdnaDirection::ToAscii, true, out)) {
    throw DomainError(DomainErrc::IdnaFailure, "IDNA conversion failed for '" + std::string(name) + "'");
  }
  if (is_ipv4_literal(out)) {
    throw DomainError(DomainErrc::NotADomain, "IP address literal '" + out + "'");
  }
  if (out.size() > kMaxNameLength) {
    throw DomainError(DomainErrc::LabelSyntax, "name longer than 253 octets");
  }
  std::size_t start = 0;
  std::string_view view{out};
  while (true) {
    auto dot = view.find('.', start);
    auto label = view.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    check_label(label, view);
    if (dot == std::string_view::npos) {
      // A purely numeric rightmost label reads as an IPv4 address in URL parsers.
      if (std::all_of(label.begin(), label.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw DomainError(DomainErrc::NotADomain, "numeric top-level label in '" + out + "'");
      }
      break;
    }
    start = dot + 1;
  }
  return out;
}

std::string to_unicode(std::string_view name) {
  std::string out;
  if (!icu_convert(name, IdnaDirection::ToUnicode, true, out)) return std::string(name);
  return out;
}

DomainName DomainName::parse(std::string_view raw) {
  std::string_view s = raw;
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);
  bool wildcard = false;
  if (s.size() >= 2 && s.substr(0, 2) == "*.") {
    s.remove_prefix(2);
    wildcard = true;
  }
  if (s.find('*') != std::string_view::npos) {
    throw DomainError(DomainErrc::LabelSyntax, "wildcard not in leading position: '" + std::string(raw) + "'");
  }
  return from_canonical(canonical_ascii(s), wildcard);
}

DomainName DomainName::from_canonical(std::string text, bool wildcard) {
  DomainName d;
  d.text_ = std::move(text);
  d.wildcard_ = wildcard;
  d.starts_.push_back(0);
  for (std::size_t i = 0; i < d.text_.size(); ++i) {
    if (d.text_[i] == '.') d.starts_.push_back(static_cast<std::uint16_t>(i + 1));
  }
  return d;
}

std::string DomainName::render() const {
  return wildcard_ ? "*." + text_ : text_;
}

std::string_view DomainName::label(std::size_t i) const {
  std::size_t begin = starts_.at(i);
  std::size_t end = i + 1 < starts_.size() ? starts_[i + 1] - 1 : text_.size();
  return std::string_view{text_}.substr(begin, end - begin);
}

std::vector<std::string_view> DomainName::labels() const {
  std::vector<std::string_view> out;
  out.reserve(label_count());
  for (std::size_t i = 0; i < label_count(); ++i) out.push_back(label(i));
  return out;
}

std::string_view DomainName::suffix(std::size_t count) const {
  if (count == 0) return {};
  if (count >= label_count()) return text_;
  return std::string_view{text_}.substr(starts_[label_count() - count]);
}

SuffixRuleSet SuffixRuleSet::parse(std::string_view text, std::string version_tag) {
  SuffixRuleSet set;
  set.version_tag_ = std::move(version_tag);
  std::vector<std::pair<std::string, std::size_t>> exceptions;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;

    // The rule is the first whitespace-delimited token on the line.
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line.remove_prefix(first);
    if (line.substr(0, 2) == "//") continue;
    auto token = line.substr(0, line.find_first_of(" \t\r"));

    auto malformed = [&](const std::string& why) {
      return DomainError(DomainErrc::MalformedRule,
                         "line " + std::to_string(line_no) + ": " + why + ": '" + std::string(token) + "'",
                         line_no);
    };

    bool exception = false;
    bool wildcard = false;
    std::string_view body = token;
    if (body.front() == '!') {
      exception = true;
      body.remove_prefix(1);
    }
    if (body == "*" && !exception) {
      set.wildcard_.emplace("");
      continue;
    }
    if (body.substr(0, 2) == "*.") {
      if (exception) throw malformed("exception rule cannot be a wildcard");
      wildcard = true;
      body.remove_prefix(2);
    }
    if (body.find('*') != std::string_view::npos) throw malformed("wildcard only allowed as leftmost label");

    std::string base;
    try {
      base = canonical_ascii(body);
    } catch (const DomainError& e) {
      throw malformed(e.what());
    }
    if (exception) {
      if (base.find('.') == std::string::npos) throw malformed("exception rule needs at least two labels");
      exceptions.emplace_back(base, line_no);
      set.exception_.insert(std::move(base));
    } else if (wildcard) {
      set.wildcard_.insert(std::move(base));
    } else {
      set.exact_.insert(std::move(base));
    }
  }

  for (const auto& [name, line] : exceptions) {
    auto parent = name.substr(name.find('.') + 1);
    if (!set.wildcard_.contains(parent)) {
      throw DomainError(DomainErrc::MalformedRule,
                        "line " + std::to_string(line) + ": exception rule '!" + name +
                            "' does not shadow any wildcard rule",
                        line);
    }
  }
  return set;
}

std::vector<SuffixRule> SuffixRuleSet::rules() const {
  std::vector<SuffixRule> out;
  out.reserve(size());
  for (const auto& r : exact_) out.push_back({r, false, false});
  for (const auto& r : wildcard_) out.push_back({r, true, false});
  for (const auto& r : exception_) out.push_back({r, false, true});
  std::sort(out.begin(), out.end(), [](const SuffixRule& a, const SuffixRule& b) {
    return std::tie(a.base, a.wildcard, a.exception) < std::tie(b.base, b.wildcard, b.exception);
  });
  return out;
}

std::size_t SuffixRuleSet::public_suffix_length(const DomainName& name, SuffixPolicy policy) const {
  const std::size_t n = name.label_count();
  std::size_t longest = 0;
  std::size_t exception_len = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    auto candidate = name.suffix(k);
    if (exception_.find(candidate) != exception_.end()) exception_len = k;
    if (exact_.find(candidate) != exact_.end()) longest = k;
    if (wildcard_.find(name.suffix(k - 1)) != wildcard_.end()) longest = k;
  }
  if (exception_len > 0) return exception_len - 1;
  if (longest > 0) return longest;
  if (policy == SuffixPolicy::Strict) {
    throw DomainError(DomainErrc::NoMatchingRule, "no suffix rule matches '" + std::string(name.str()) + "'");
  }
  return 1;
}

RegisteredDomain SuffixRuleSet::registered_domain(const DomainName& name, SuffixPolicy policy) const {
  std::size_t suffix_len = public_suffix_length(name, policy);
  if (suffix_len >= name.label_count()) {
    throw DomainError(DomainErrc::IsPublicSuffix, "'" + std::string(name.str()) + "' is a public suffix");
  }
  return RegisteredDomain{DomainName::from_canonical(std::string(name.suffix(suffix_len + 1)), false)};
}

}  // namespace amass
