#include "amass/time.hpp"

#include <charconv>

#include <fmt/format.h>

namespace amass {

namespace {

template <typename Int>
bool parse_fixed(std::string_view text, size_t pos, size_t width, Int& out) {
  if (pos + width > text.size()) return false;
  for (size_t i = pos; i < pos + width; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, out);
  return ec == std::errc{} && ptr == text.data() + pos + width;
}

std::optional<Date> make_date(int y, unsigned m, unsigned d) {
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!parse_fixed(text, 0, 4, y) || !parse_fixed(text, 5, 2, m) || !parse_fixed(text, 8, 2, d)) {
    return std::nullopt;
  }
  return make_date(y, m, d);
}

std::optional<TimePoint> parse_rfc3339(std::string_view text) {
  if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    return std::nullopt;
  }
  auto date = parse_date(text.substr(0, 10));
  unsigned hh = 0, mm = 0, ss = 0;
  if (!date || !parse_fixed(text, 11, 2, hh) || !parse_fixed(text, 14, 2, mm) ||
      !parse_fixed(text, 17, 2, ss) || hh > 23 || mm > 59 || ss > 60) {
    return std::nullopt;
  }
  using namespace std::chrono;
  return TimePoint{*date} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  return fmt::format("{:04d}-{:02d}-{:02d}", int(ymd.year()), unsigned(ymd.month()),
                     unsigned(ymd.day()));
}

std::string format_rfc3339(TimePoint t) {
  using namespace std::chrono;
  auto day = floor<days>(t);
  hh_mm_ss hms{t - day};
  return fmt::format("{}T{:02d}:{:02d}:{:02d}Z", format_date(day), hms.hours().count(),
                     hms.minutes().count(), hms.seconds().count());
}

namespace {

// Monday of ISO week 1: the week containing January 4th.
Date iso_week1_monday(int y) {
  using namespace std::chrono;
  sys_days jan4{year{y} / January / 4};
  return jan4 - (weekday{jan4} - Monday);
}

}  // namespace

unsigned iso_weeks_in_year(int y) {
  auto span = iso_week1_monday(y + 1) - iso_week1_monday(y);
  return static_cast<unsigned>(span.count() / 7);
}

std::optional<Date> iso_week_monday(int y, unsigned week) {
  if (week < 1 || week > iso_weeks_in_year(y)) return std::nullopt;
  return iso_week1_monday(y) + std::chrono::weeks{week - 1};
}

}  // namespace amass
