#include <doctest.h>

#include <algorithm>

#include "amass/ct/leaf.hpp"
#include "amass/domain.hpp"
#include "ct/der.hpp"
#include "fixture_certs.hpp"

using namespace amass;
using fixture::at;

namespace {

fixture::CertSpec spec(std::string cn, std::vector<std::string> dns) {
  fixture::CertSpec s;
  s.common_name = std::move(cn);
  s.dns_names = std::move(dns);
  s.not_before = at("2022-03-01T10:00:00Z");
  s.not_after = at("2022-05-30T10:00:00Z");
  return s;
}

ct::CtErrc error_of(const ct::RawEntry& e) {
  try {
    ct::parse_entry(e);
  } catch (const ct::CtError& err) {
    return err.code();
  }
  FAIL("entry parsed unexpectedly");
  return ct::CtErrc::HttpError;
}

std::vector<std::uint8_t> bytes(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

}  // namespace

TEST_CASE("x509 entry: CN first, then SAN dNSNames, duplicates dropped") {
  auto s = spec("www.example.nl", {"www.example.nl", "example.nl", "*.shop.example.nl"});
  auto info = ct::parse_entry(fixture::x509_entry(s, 1646128800123));
  CHECK(info.kind == ct::EntryKind::X509);
  CHECK(info.log_timestamp_ms == 1646128800123);
  CHECK(info.names == std::vector<std::string>{"www.example.nl", "example.nl", "*.shop.example.nl"});
  CHECK(info.not_before == s.not_before);
  CHECK(info.not_after == s.not_after);
}

TEST_CASE("precert entry carries the TBSCertificate") {
  auto s = spec("", {"pre.example.be"});
  auto info = ct::parse_entry(fixture::precert_entry(s));
  CHECK(info.kind == ct::EntryKind::Precert);
  CHECK(info.names == std::vector<std::string>{"pre.example.be"});
  CHECK(info.not_after == s.not_after);
}

TEST_CASE("CNs that are not domain names are ignored; IP SANs are not dNSNames") {
  auto s = spec("Fixture Server", {"a.example.nl"});
  s.ip_addresses = {"192.0.2.7", "2001:db8::1"};
  auto info = ct::parse_entry(fixture::x509_entry(s));
  CHECK(info.names == std::vector<std::string>{"a.example.nl"});

  auto bare = spec("", {});
  bare.ip_addresses = {"192.0.2.8"};
  CHECK(ct::parse_entry(fixture::x509_entry(bare)).names.empty());
}

TEST_CASE("UTF-8 CN is kept and canonicalizes to its A-label") {
  auto info = ct::parse_entry(fixture::x509_entry(spec("bücher.de", {})));
  REQUIRE(info.names.size() == 1);
  CHECK(DomainName::parse(info.names[0]).str() == "xn--bcher-kva.de");
}

TEST_CASE("GeneralizedTime validity after 2049") {
  auto s = spec("late.example.nl", {});
  s.not_after = at("2051-07-04T01:02:03Z");
  auto info = ct::parse_entry(fixture::x509_entry(s));
  CHECK(info.not_after == s.not_after);
}

TEST_CASE("notBefore after notAfter is MalformedDer") {
  auto s = spec("x.example.nl", {});
  std::swap(s.not_before, s.not_after);
  CHECK(error_of(fixture::x509_entry(s)) == ct::CtErrc::MalformedDer);
}

TEST_CASE("leaf framing errors") {
  auto cert = fixture::make_certificate(spec("a.example.nl", {}));
  auto leaf = fixture::x509_leaf(cert, 1);

  auto truncated = leaf;
  truncated.resize(truncated.size() - 5);
  CHECK(error_of(fixture::raw_entry(truncated)) == ct::CtErrc::MalformedLeaf);

  auto trailing = leaf;
  trailing.push_back(0);
  CHECK(error_of(fixture::raw_entry(trailing)) == ct::CtErrc::MalformedLeaf);

  auto version = leaf;
  version[0] = 1;
  CHECK(error_of(fixture::raw_entry(version)) == ct::CtErrc::MalformedLeaf);

  auto entry_type = leaf;
  entry_type[11] = 7;
  CHECK(error_of(fixture::raw_entry(entry_type)) == ct::CtErrc::MalformedLeaf);

  CHECK(error_of({"not base64!", ""}) == ct::CtErrc::MalformedLeaf);
  CHECK(error_of({"", ""}) == ct::CtErrc::MalformedLeaf);
}

TEST_CASE("garbage certificate inside a well-formed leaf is MalformedDer") {
  fixture::Bytes junk(40, 0x42);
  CHECK(error_of(fixture::raw_entry(fixture::x509_leaf(junk, 1))) == ct::CtErrc::MalformedDer);

  auto cert = fixture::make_certificate(spec("a.example.nl", {}));
  cert.resize(cert.size() / 2);
  CHECK(error_of(fixture::raw_entry(fixture::x509_leaf(cert, 1))) == ct::CtErrc::MalformedDer);
}

TEST_CASE("base64 agrees with OpenSSL's encoder") {
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 57u, 100u}) {
    fixture::Bytes data(n);
    for (std::size_t i = 0; i < n; ++i) data[i] = static_cast<std::uint8_t>(i * 37 + 11);
    auto text = fixture::base64(data);
    CHECK(ct::base64_encode(data) == text);
    CHECK(ct::base64_decode(text) == data);
  }
}

TEST_CASE("DER time forms") {
  auto utc = bytes({'5', '0', '0', '1', '0', '1', '0', '0', '0', '0', '0', '0', 'Z'});
  CHECK(format_rfc3339(der::parse_time({0x17, utc})) == "1950-01-01T00:00:00Z");
  auto utc49 = bytes({'4', '9', '1', '2', '3', '1', '2', '3', '5', '9', '5', '9', 'Z'});
  CHECK(format_rfc3339(der::parse_time({0x17, utc49})) == "2049-12-31T23:59:59Z");
  auto gen = bytes({'2', '0', '5', '0', '0', '1', '0', '1', '1', '2', '0', '0', '0', '0', 'Z'});
  CHECK(format_rfc3339(der::parse_time({0x18, gen})) == "2050-01-01T12:00:00Z");
  auto no_zone = bytes({'5', '0', '0', '1', '0', '1', '0', '0', '0', '0', '0', '0'});
  CHECK_THROWS_AS(der::parse_time({0x17, no_zone}), ct::CtError);
}

TEST_CASE("DER reader rejects indefinite lengths, high tags and overruns") {
  auto indefinite = bytes({0x30, 0x80, 0x00, 0x00});
  CHECK_THROWS_AS(der::Reader(indefinite).next(), ct::CtError);
  auto high_tag = bytes({0x1F, 0x81, 0x01, 0x00});
  CHECK_THROWS_AS(der::Reader(high_tag).next(), ct::CtError);
  auto overrun = bytes({0x04, 0x05, 0x01});
  CHECK_THROWS_AS(der::Reader(overrun).next(), ct::CtError);

  auto two = bytes({0x02, 0x01, 0x05, 0x04, 0x81, 0x01, 0x07});
  der::Reader r(two);
  CHECK(*r.peek_tag() == 0x02);
  CHECK(r.expect(0x02)[0] == 5);
  auto t = r.next();
  CHECK(t.tag == 0x04);
  CHECK(t.value.size() == 1);
  CHECK(r.empty());
  CHECK_FALSE(r.peek_tag());
}

TEST_CASE("parse_certificate and parse_tbs_certificate agree") {
  auto s = spec("same.example.nl", {"alt.example.nl"});
  auto full = der::parse_certificate(fixture::make_certificate(s));
  auto tbs = der::parse_tbs_certificate(fixture::make_precert_tbs(s));
  CHECK(full.common_names == tbs.common_names);
  CHECK(full.dns_names == tbs.dns_names);
  CHECK(full.not_before == tbs.not_before);
  CHECK(full.common_names == std::vector<std::string>{"same.example.nl"});
}
