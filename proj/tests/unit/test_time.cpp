#include <doctest.h>

#include <ctime>
#include <map>

#include "amass/time.hpp"

using namespace amass;

namespace {

// ISO week of a civil day, from libc's calendar rather than <chrono>.
struct IsoWeek {
  int year;
  unsigned week;
};

IsoWeek iso_week_of(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  int wday = tm.tm_wday == 0 ? 7 : tm.tm_wday;  // Monday = 1
  std::time_t thursday = t + static_cast<std::time_t>(4 - wday) * 86400;
  std::tm th{};
  gmtime_r(&thursday, &th);
  return {th.tm_year + 1900, static_cast<unsigned>(th.tm_yday / 7 + 1)};
}

std::time_t utc(int y, int m, int d) {
  std::tm tm{};
  tm.tm_year = y - 1900;
  tm.tm_mon = m - 1;
  tm.tm_mday = d;
  return timegm(&tm);
}

}  // namespace

TEST_CASE("ISO week Mondays agree with a day-by-day libc oracle over 2008-2100") {
  std::map<std::pair<int, unsigned>, std::time_t> first_monday;
  std::map<int, unsigned> max_week;
  for (std::time_t t = utc(2007, 12, 24); t <= utc(2101, 1, 7); t += 86400) {
    std::tm tm{};
    gmtime_r(&t, &tm);
    auto w = iso_week_of(t);
    if (tm.tm_wday == 1) first_monday.emplace(std::pair{w.year, w.week}, t);
    max_week[w.year] = std::max(max_week[w.year], w.week);
  }
  for (int year = 2008; year <= 2100; ++year) {
    CHECK(iso_weeks_in_year(year) == max_week[year]);
    for (unsigned week = 1; week <= max_week[year]; ++week) {
      auto got = iso_week_monday(year, week);
      REQUIRE(got.has_value());
      CHECK(got->time_since_epoch().count() * 86400 == first_monday.at({year, week}));
    }
    CHECK_FALSE(iso_week_monday(year, 0).has_value());
    CHECK_FALSE(iso_week_monday(year, max_week[year] + 1).has_value());
  }
}

TEST_CASE("known ISO weeks") {
  CHECK(format_date(*iso_week_monday(2020, 53)) == "2020-12-28");
  CHECK(format_date(*iso_week_monday(2021, 1)) == "2021-01-04");
  CHECK(format_date(*iso_week_monday(2023, 6)) == "2023-02-06");
  CHECK(iso_weeks_in_year(2020) == 53);
  CHECK(iso_weeks_in_year(2021) == 52);
}

TEST_CASE("parse_date") {
  CHECK(format_date(*parse_date("2024-02-29")) == "2024-02-29");
  CHECK_FALSE(parse_date("2023-02-29"));
  CHECK_FALSE(parse_date("2023-13-01"));
  CHECK_FALSE(parse_date("2023-1-01"));
  CHECK_FALSE(parse_date("2023-01-01 "));
  CHECK_FALSE(parse_date("20230101"));
  CHECK_FALSE(parse_date(""));
  CHECK(parse_date("1970-01-01")->time_since_epoch().count() == 0);
}

TEST_CASE("parse_rfc3339 round-trips and rejects other forms") {
  auto t = parse_rfc3339("2022-06-01T12:34:56Z");
  REQUIRE(t);
  CHECK(t->time_since_epoch().count() == utc(2022, 6, 1) + 12 * 3600 + 34 * 60 + 56);
  CHECK(format_rfc3339(*t) == "2022-06-01T12:34:56Z");
  CHECK_FALSE(parse_rfc3339("2022-06-01T12:34:56"));
  CHECK_FALSE(parse_rfc3339("2022-06-01T24:00:00Z"));
  CHECK_FALSE(parse_rfc3339("2022-06-01 12:34:56Z"));
  CHECK_FALSE(parse_rfc3339("2022-06-01T12:34:56+00:00"));
  CHECK(format_rfc3339(start_of(*parse_date("2000-03-01"))) == "2000-03-01T00:00:00Z");
  CHECK(floor_day(*t) == *parse_date("2022-06-01"));
}

TEST_CASE("pre-epoch instants format correctly") {
  auto t = parse_rfc3339("1969-12-31T23:59:59Z");
  REQUIRE(t);
  CHECK(t->time_since_epoch().count() == -1);
  CHECK(format_rfc3339(*t) == "1969-12-31T23:59:59Z");
  CHECK(format_date(floor_day(*t)) == "1969-12-31");
}
