#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace hotspot {

// Grid square identifier as used by the activity, interaction and grid files.
using CellId = std::uint64_t;

// Milliseconds since the Unix epoch, UTC.
using EpochMillis = std::int64_t;

// Half-open interval [start, end) of epoch milliseconds.
class TimeWindow {
 public:
  // Throws DomainError unless start < end.
  TimeWindow(EpochMillis start, EpochMillis end);

  // The widest representable window; used when no bounds are given.
  static TimeWindow unbounded() noexcept;

  EpochMillis start() const noexcept { return start_; }
  EpochMillis end() const noexcept { return end_; }
  bool contains(EpochMillis t) const noexcept { return t >= start_ && t < end_; }
  bool is_unbounded() const noexcept;

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;

 private:
  struct Unchecked {};
  TimeWindow(EpochMillis start, EpochMillis end, Unchecked) noexcept
      : start_(start), end_(end) {}

  EpochMillis start_;
  EpochMillis end_;
};

// Accepts either an integer (epoch milliseconds) or an ISO-8601 UTC date
// "YYYY-MM-DD" / "YYYY-MM-DDTHH:MM[:SS]" (optionally suffixed with 'Z').
EpochMillis parse_timestamp(const std::string& text);

using CellPair = std::pair<CellId, CellId>;

}  // namespace hotspot
