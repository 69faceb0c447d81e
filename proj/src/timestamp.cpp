#include "lenori/timestamp.hpp"

#include <charconv>
#include <cstdio>

namespace lenori {

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int &out)
{
  if (pos + len > s.size()) return false;
  auto const *first = s.data() + pos;
  auto const *last = first + len;
  for (auto const *p = first; p != last; ++p) {
    if (*p < '0' || *p > '9') return false;
  }
  return std::from_chars(first, last, out).ec == std::errc{};
}

} // namespace

auto parse_timestamp(std::string_view s) -> std::optional<Minutes>
{
  using namespace std::chrono;
  // YYYY-MM-DD HH:MM[:SS]
  if (s.size() != 16 && s.size() != 19) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != ' ' && s[10] != 'T') || s[13] != ':') return std::nullopt;
  int y, mo, d, h, mi, sec = 0;
  if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, mo) || !read_int(s, 8, 2, d) || !read_int(s, 11, 2, h) ||
      !read_int(s, 14, 2, mi)) {
    return std::nullopt;
  }
  if (s.size() == 19) {
    if (s[16] != ':' || !read_int(s, 17, 2, sec) || sec > 59) return std::nullopt;
  }
  if (h > 23 || mi > 59) return std::nullopt;
  year_month_day const ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Minutes{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi}};
}

auto format_timestamp(Minutes t) -> std::string
{
  using namespace std::chrono;
  auto const day_point = floor<days>(t);
  year_month_day const ymd{day_point};
  auto const since_midnight = t - day_point;
  auto const h = duration_cast<hours>(since_midnight).count();
  auto const m = (since_midnight - hours{h}).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(h),
                static_cast<int>(m));
  return buf;
}

auto month_of(Minutes t) -> unsigned
{
  using namespace std::chrono;
  return static_cast<unsigned>(year_month_day{floor<days>(t)}.month());
}

auto year_of(Minutes t) -> int
{
  using namespace std::chrono;
  return static_cast<int>(year_month_day{floor<days>(t)}.year());
}

auto year_start(int y) -> Minutes
{
  using namespace std::chrono;
  return Minutes{sys_days{year{y} / January / 1}.time_since_epoch()};
}

} // namespace lenori
