#include "hotspot/types.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "hotspot/error.hpp"

namespace hotspot {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::domain: return "domain";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::calibration: return "calibration";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(ErrorKind::parse, line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

TimeWindow::TimeWindow(EpochMillis start, EpochMillis end) : start_(start), end_(end) {
  if (!(start < end)) {
    throw DomainError("time window start (" + std::to_string(start) +
                      ") must be before end (" + std::to_string(end) + ")");
  }
}

TimeWindow TimeWindow::unbounded() noexcept {
  return TimeWindow(std::numeric_limits<EpochMillis>::min(),
                    std::numeric_limits<EpochMillis>::max(), Unchecked{});
}

bool TimeWindow::is_unbounded() const noexcept { return *this == unbounded(); }

namespace {

bool parse_fixed(const std::string& s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  const char* first = s.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc{} && ptr == first + len;
}

}  // namespace

EpochMillis parse_timestamp(const std::string& text) {
  EpochMillis millis = 0;
  {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), millis);
    if (ec == std::errc{} && ptr == text.data() + text.size() && !text.empty()) return millis;
  }

  std::string s = text;
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.pop_back();

  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  bool ok = s.size() >= 10 && parse_fixed(s, 0, 4, year) && s[4] == '-' &&
            parse_fixed(s, 5, 2, month) && s[7] == '-' && parse_fixed(s, 8, 2, day);
  if (ok && s.size() > 10) {
    ok = (s[10] == 'T' || s[10] == ' ') && s.size() >= 16 && parse_fixed(s, 11, 2, hour) &&
         s[13] == ':' && parse_fixed(s, 14, 2, minute);
    if (ok && s.size() > 16) {
      ok = s.size() == 19 && s[16] == ':' && parse_fixed(s, 17, 2, second);
    }
  }
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ok || !ymd.ok() || hour > 23 || minute > 59 || second > 59) {
    throw UsageError("invalid timestamp '" + text +
                     "' (expected epoch milliseconds or YYYY-MM-DD[THH:MM[:SS]])");
  }
  const auto tp = sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second};
  return duration_cast<milliseconds>(tp.time_since_epoch()).count();
}

}  // namespace hotspot
