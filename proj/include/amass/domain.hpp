#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace amass {

enum class DomainErrc {
  NotADomain,
  LabelSyntax,
  IdnaFailure,
  IsPublicSuffix,
  NoMatchingRule,
  MalformedRule,
};

std::string_view to_string(DomainErrc code);

class DomainError : public std::runtime_error {
 public:
  DomainError(DomainErrc code, const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), code_(code), line_(line) {}
  DomainErrc code() const noexcept { return code_; }
  /// 1-based line number for MalformedRule, 0 otherwise.
  std::size_t line() const noexcept { return line_; }

 private:
  DomainErrc code_;
  std::size_t line_;
};

/// A canonical, lower-case A-label domain name without a trailing dot.
/// Labels are ordered leaf first: `www.example.nl` is {www, example, nl}.
class DomainName {
 public:
  /// Canonicalizes a name harvested from a certificate or URL host.
  /// A single leading `*.` is removed and remembered in was_wildcard().
  static DomainName parse(std::string_view raw);

  std::string_view str() const noexcept { return text_; }
  /// Dotted form including the `*.` prefix for names that carried one.
  std::string render() const;
  bool was_wildcard() const noexcept { return wildcard_; }

  std::size_t label_count() const noexcept { return starts_.size(); }
  std::string_view label(std::size_t i) const;
  std::vector<std::string_view> labels() const;
  std::string_view tld() const { return label(label_count() - 1); }
  /// The rightmost `count` labels as a dotted string view.
  std::string_view suffix(std::size_t count) const;

  friend bool operator==(const DomainName& a, const DomainName& b) noexcept {
    return a.wildcard_ == b.wildcard_ && a.text_ == b.text_;
  }

 private:
  friend class SuffixRuleSet;
  DomainName() = default;
  static DomainName from_canonical(std::string text, bool wildcard);

  std::string text_;
  std::vector<std::uint16_t> starts_;
  bool wildcard_ = false;
};

inline DomainName normalize_name(std::string_view raw) { return DomainName::parse(raw); }

/// Converts a dotted name (possibly containing U-labels) to its canonical
/// A-label form and validates every label. Does not accept wildcards.
std::string canonical_ascii(std::string_view name);

/// Converts A-labels back to Unicode for display. Invalid input is returned unchanged.
std::string to_unicode(std::string_view name);

/// A public suffix plus exactly one label (eTLD+1).
class RegisteredDomain {
 public:
  const DomainName& name() const noexcept { return name_; }
  std::string_view str() const noexcept { return name_.str(); }
  std::string_view tld() const { return name_.tld(); }

  friend bool operator==(const RegisteredDomain& a, const RegisteredDomain& b) noexcept {
    return a.name_ == b.name_;
  }
  friend auto operator<=>(const RegisteredDomain& a, const RegisteredDomain& b) noexcept {
    return a.str() <=> b.str();
  }

 private:
  friend class SuffixRuleSet;
  explicit RegisteredDomain(DomainName name) : name_(std::move(name)) {}
  DomainName name_;
};

enum class SuffixPolicy {
  /// Names under unlisted TLDs fall back to the implicit `*` rule.
  Lenient,
  /// A name no rule matches is an error.
  Strict,
};

struct SuffixRule {
  std::string base;  ///< canonical dotted name, without `*.` or `!`
  bool wildcard = false;
  bool exception = false;
  friend bool operator==(const SuffixRule&, const SuffixRule&) = default;
};

/// Parsed Public Suffix List rules.
class SuffixRuleSet {
 public:
  SuffixRuleSet() = default;

  /// Parses PSL text. Throws DomainError(MalformedRule) with the offending line.
  static SuffixRuleSet parse(std::string_view text, std::string version_tag = {});

  const std::string& version_tag() const noexcept { return version_tag_; }
  std::size_t size() const noexcept { return exact_.size() + wildcard_.size() + exception_.size(); }
  bool empty() const noexcept { return size() == 0; }
  /// All rules, sorted by (base, wildcard, exception).
  std::vector<SuffixRule> rules() const;

  /// Number of labels in the public suffix of `name`.
  std::size_t public_suffix_length(const DomainName& name, SuffixPolicy policy = SuffixPolicy::Lenient) const;

  RegisteredDomain registered_domain(const DomainName& name,
                                     SuffixPolicy policy = SuffixPolicy::Lenient) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  using Set = std::unordered_set<std::string, Hash, std::equal_to<>>;

  Set exact_;
  Set wildcard_;   // keyed by the base after `*.`; "" is the bare `*` rule
  Set exception_;  // keyed by the full name after `!`
  std::string version_tag_;
};

}  // namespace amass
