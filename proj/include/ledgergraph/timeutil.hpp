#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace ledgergraph {

// Half-open [start, end) in seconds since epoch, UTC.
struct Interval {
  std::int64_t start = 0;
  std::int64_t end = 0;

  bool contains(std::int64_t t) const noexcept { return t >= start && t < end; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Accepts `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM:SS` with optional `Z`, `+00:00` or
// fractional seconds, and a space instead of `T`. Offsets other than UTC are
// applied.
inline std::optional<std::int64_t> parse_utc(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  const std::string str(text);
  int consumed = 0;
  if (std::sscanf(str.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &consumed) != 3 || consumed != 10) return std::nullopt;
  std::string_view rest = text.substr(10);
  if (!rest.empty()) {
    if (rest.front() != 'T' && rest.front() != ' ') return std::nullopt;
    const std::string clock(rest.substr(1));
    if (std::sscanf(clock.c_str(), "%2d:%2d:%2d%n", &h, &mi, &s, &consumed) != 3 || consumed != 8) return std::nullopt;
    rest = rest.substr(9);
    if (!rest.empty() && rest.front() == '.') {
      std::size_t i = 1;
      while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
      rest = rest.substr(i);
    }
  }
  long offset = 0;
  if (rest == "Z" || rest.empty()) {
  } else if ((rest.front() == '+' || rest.front() == '-') && rest.size() == 6 && rest[3] == ':') {
    int oh = 0, om = 0;
    if (std::sscanf(std::string(rest.substr(1)).c_str(), "%2d:%2d", &oh, &om) != 2) return std::nullopt;
    offset = (oh * 3600L + om * 60L) * (rest.front() == '+' ? 1 : -1);
  } else {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  const auto days_since = sys_days{date}.time_since_epoch().count();
  return static_cast<std::int64_t>(days_since) * 86400 + h * 3600 + mi * 60 + s - offset;
}

inline std::string format_utc(std::int64_t t) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{t}};
  const auto day_point = floor<days>(tp);
  const year_month_day date{day_point};
  const hh_mm_ss clock{tp - day_point};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                static_cast<long>(clock.hours().count()), static_cast<long>(clock.minutes().count()),
                static_cast<long>(clock.seconds().count()));
  return buf;
}

}  // namespace ledgergraph
