#include <doctest.h>

#include "amass/ct/client.hpp"
#include "fixture_certs.hpp"
#include "fixture_log.hpp"

using namespace amass;
using namespace std::chrono_literals;

namespace {

std::vector<ct::RawEntry> numbered_entries(int n) {
  // Distinct placeholder leaves; the client does not decode them.
  std::vector<ct::RawEntry> out;
  for (int i = 0; i < n; ++i) out.push_back({"leaf" + std::to_string(i), "extra" + std::to_string(i)});
  return out;
}

ct::RetryPolicy fast_retry(int attempts = 4) {
  ct::RetryPolicy p;
  p.max_attempts = attempts;
  p.initial_backoff = 1ms;
  p.timeout = 5s;
  return p;
}

ct::CtLogDescriptor descriptor(const fixture::FixtureLog& log, std::string suffix = "") {
  return {"fixture", log.base_url() + suffix, std::nullopt};
}

}  // namespace

TEST_CASE("get-sth") {
  fixture::FixtureLog log(numbered_entries(7));
  ct::CtLogClient client(descriptor(log), fast_retry());
  auto sth = client.fetch_sth();
  CHECK(sth.tree_size == 7);
  CHECK(sth.timestamp_ms == 1700000000000ULL);
  CHECK(client.request_count() == 1);
}

TEST_CASE("get-entries follows short pages and keeps order") {
  fixture::FixtureLog log(numbered_entries(25), 10);
  ct::CtLogClient client(descriptor(log, "/"), fast_retry());
  auto entries = client.fetch_entries(0, 24);
  REQUIRE(entries.size() == 25);
  for (int i = 0; i < 25; ++i) {
    CHECK(entries[i].leaf_input == "leaf" + std::to_string(i));
    CHECK(entries[i].extra_data == "extra" + std::to_string(i));
  }
  CHECK(log.entry_requests() == 3);

  auto tail = client.fetch_entries(23, 24);
  CHECK(tail.size() == 2);
  CHECK(tail[0].leaf_input == "leaf23");
}

TEST_CASE("range checks") {
  fixture::FixtureLog log(numbered_entries(5));
  ct::CtLogClient client(descriptor(log), fast_retry());
  CHECK_THROWS_AS(client.fetch_entries(0, 5), ct::CtError);
  try {
    client.fetch_entries(3, 9);
  } catch (const ct::CtError& e) {
    CHECK(e.code() == ct::CtErrc::RangeBeyondTree);
  }
  try {
    client.fetch_entries(4, 3);
  } catch (const ct::CtError& e) {
    CHECK(e.code() == ct::CtErrc::RangeBeyondTree);
  }
}

TEST_CASE("a growing log is picked up without an explicit get-sth") {
  fixture::FixtureLog log(numbered_entries(20));
  log.set_tree_size(10);
  ct::CtLogClient client(descriptor(log), fast_retry());
  CHECK(client.fetch_sth().tree_size == 10);
  log.set_tree_size(20);
  CHECK(client.fetch_entries(8, 15).size() == 8);
}

TEST_CASE("a shrinking tree is an error") {
  fixture::FixtureLog log(numbered_entries(20));
  ct::CtLogClient client(descriptor(log), fast_retry());
  client.fetch_sth();
  log.set_tree_size(12);
  try {
    client.fetch_sth();
    FAIL("expected TreeShrank");
  } catch (const ct::CtError& e) {
    CHECK(e.code() == ct::CtErrc::TreeShrank);
  }
}

TEST_CASE("429 and 5xx are retried") {
  fixture::FixtureLog log(numbered_entries(3));
  ct::CtLogClient client(descriptor(log), fast_retry(4));
  log.fail_next(2, 503);
  CHECK(client.fetch_sth().tree_size == 3);
  CHECK(client.request_count() == 3);

  log.fail_next(3, 429);
  CHECK(client.fetch_entries(0, 2).size() == 3);
  CHECK(client.request_count() == 7);
}

TEST_CASE("retries are bounded") {
  fixture::FixtureLog log(numbered_entries(3));
  ct::CtLogClient client(descriptor(log), fast_retry(3));
  log.fail_next(100, 500);
  try {
    client.fetch_sth();
    FAIL("expected HttpError");
  } catch (const ct::CtError& e) {
    CHECK(e.code() == ct::CtErrc::HttpError);
    CHECK(e.http_status() == 500);
  }
  CHECK(client.request_count() == 3);
}

TEST_CASE("other client errors fail at once") {
  fixture::FixtureLog log(numbered_entries(3));
  ct::CtLogClient client(descriptor(log), fast_retry(5));
  log.fail_next(1, 404);
  try {
    client.fetch_sth();
    FAIL("expected HttpError");
  } catch (const ct::CtError& e) {
    CHECK(e.http_status() == 404);
  }
  CHECK(client.request_count() == 1);
}

TEST_CASE("unreachable log") {
  ct::CtLogClient client({"down", "http://127.0.0.1:1", std::nullopt}, fast_retry(2));
  try {
    client.fetch_sth();
    FAIL("expected HttpError");
  } catch (const ct::CtError& e) {
    CHECK(e.code() == ct::CtErrc::HttpError);
    CHECK(e.http_status() == 0);
  }
  CHECK(client.request_count() == 2);
}

TEST_CASE("log descriptor validation") {
  auto invalid = [](ct::CtLogDescriptor d) {
    try {
      d.validate();
    } catch (const ct::CtError& e) {
      return e.code() == ct::CtErrc::InvalidLog;
    }
    return false;
  };
  CHECK(invalid({"", "https://ct.example.org/log", std::nullopt}));
  CHECK(invalid({"x", "ftp://ct.example.org/log", std::nullopt}));
  CHECK(invalid({"x", "ct.example.org/log", std::nullopt}));
  CHECK(invalid({"x", "https://", std::nullopt}));
  auto d1 = *parse_date("2023-01-01");
  auto d2 = *parse_date("2023-07-01");
  CHECK(invalid({"x", "https://ct.example.org/2023h1", std::pair{d2, d1}}));
  CHECK_NOTHROW(ct::CtLogDescriptor{"x", "https://ct.example.org/2023h1/", std::pair{d1, d2}}.validate());
}
