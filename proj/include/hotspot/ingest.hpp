#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hotspot/error.hpp"
#include "hotspot/exact_sum.hpp"
#include "hotspot/types.hpp"

namespace hotspot::ingest {

// ---------------------------------------------------------------------------
// Records

struct GridCell {
  CellId cell_id = 0;
  // Closed ring of (longitude, latitude) pairs, WGS84.
  std::vector<std::pair<double, double>> polygon;
};

struct ActivityRecord {
  CellId cell_id = 0;
  EpochMillis timestamp = 0;
  int country_code = 0;
  double sms_in = 0.0;
  double sms_out = 0.0;
  double call_in = 0.0;
  double call_out = 0.0;
  double internet = 0.0;

  friend bool operator==(const ActivityRecord&, const ActivityRecord&) = default;
};

struct InteractionRecord {
  CellId src_id = 0;
  CellId dst_id = 0;
  EpochMillis timestamp = 0;
  double strength = 0.0;

  friend bool operator==(const InteractionRecord&, const InteractionRecord&) = default;
};

// ---------------------------------------------------------------------------
// Layout and options

// Zero-based column index per field. A negative index marks the column as
// absent (numeric fields then read as 0).
struct ActivityColumns {
  int cell_id = 0;
  int timestamp = 1;
  int country_code = 2;
  int sms_in = 3;
  int sms_out = 4;
  int call_in = 5;
  int call_out = 6;
  int internet = 7;
};

struct InteractionColumns {
  int src_id = 0;
  int dst_id = 1;
  int timestamp = 2;
  int strength = 3;
};

struct ColumnLayout {
  ActivityColumns activity;
  InteractionColumns interactions;
  char delimiter = '\t';
};

enum class MalformedPolicy { abort, skip };

struct IngestOptions {
  ColumnLayout layout;
  MalformedPolicy policy = MalformedPolicy::abort;
};

// Reads a plain-text key/value configuration:
//
//   # comment
//   delimiter = tab            (tab | comma | semicolon | space | any single char)
//   malformed = abort          (abort | skip)
//   activity.cell_id = 0       (activity.<field> / interactions.<field>)
//
// Unknown keys are rejected with a ParseError naming the line.
IngestOptions parse_ingest_options(std::string_view text);
IngestOptions load_ingest_options(const std::filesystem::path& path);

struct ParseStats {
  std::size_t lines = 0;
  std::size_t records = 0;
  std::size_t skipped = 0;
};

// ---------------------------------------------------------------------------
// Line level

// Throws ParseError carrying line_no on malformed input.
ActivityRecord parse_activity_line(std::string_view line, const ColumnLayout& layout,
                                   std::size_t line_no);
InteractionRecord parse_interaction_line(std::string_view line, const ColumnLayout& layout,
                                         std::size_t line_no);

// Inverse of the parsers above; numbers use shortest round-trip formatting.
std::string format_activity_line(const ActivityRecord& record, const ColumnLayout& layout);
std::string format_interaction_line(const InteractionRecord& record, const ColumnLayout& layout);

// ---------------------------------------------------------------------------
// Streaming readers. Files may be gzip-compressed (detected by magic bytes).

class LineSource;

class ActivityReader {
 public:
  ActivityReader(const std::filesystem::path& path, IngestOptions options);
  ~ActivityReader();
  ActivityReader(ActivityReader&&) noexcept;
  ActivityReader& operator=(ActivityReader&&) noexcept;

  std::optional<ActivityRecord> next();
  const ParseStats& stats() const noexcept { return stats_; }

 private:
  std::unique_ptr<LineSource> source_;
  IngestOptions options_;
  ParseStats stats_;
};

class InteractionReader {
 public:
  InteractionReader(const std::filesystem::path& path, IngestOptions options);
  ~InteractionReader();
  InteractionReader(InteractionReader&&) noexcept;
  InteractionReader& operator=(InteractionReader&&) noexcept;

  std::optional<InteractionRecord> next();
  const ParseStats& stats() const noexcept { return stats_; }

 private:
  std::unique_ptr<LineSource> source_;
  IngestOptions options_;
  ParseStats stats_;
};

std::vector<ActivityRecord> parse_activity(const std::filesystem::path& path,
                                           const IngestOptions& options = {},
                                           ParseStats* stats = nullptr);
std::vector<InteractionRecord> parse_interactions(const std::filesystem::path& path,
                                                  const IngestOptions& options = {},
                                                  ParseStats* stats = nullptr);

// Throws ParseError for invalid GeoJSON, UnsupportedGeometryError for
// non-Polygon features and DomainError for duplicate ids or bad rings.
std::vector<GridCell> parse_grid(const std::filesystem::path& path);
std::vector<GridCell> parse_grid_text(std::string_view geojson);
std::string format_grid(std::span<const GridCell> cells);

class UnsupportedGeometryError : public DomainError {
 public:
  using DomainError::DomainError;
};

// ---------------------------------------------------------------------------
// Aggregates

struct TrafficAggregate {
  TimeWindow window = TimeWindow::unbounded();
  std::map<CellId, double> intensities;
};

struct InteractionAggregate {
  TimeWindow window = TimeWindow::unbounded();
  std::map<CellPair, double> strengths;
};

// Mergeable, order-independent accumulators. Merging two accumulators fed
// with disjoint record streams yields exactly the accumulator of the
// concatenated stream.
class TrafficAccumulator {
 public:
  explicit TrafficAccumulator(TimeWindow window) : window_(window) {}

  void add(const ActivityRecord& record);
  void merge(const TrafficAccumulator& other);
  TrafficAggregate finish() const;

 private:
  TimeWindow window_;
  std::unordered_map<CellId, ExactSum> sums_;
};

class InteractionAccumulator {
 public:
  explicit InteractionAccumulator(TimeWindow window) : window_(window) {}

  void add(const InteractionRecord& record);
  void merge(const InteractionAccumulator& other);
  InteractionAggregate finish() const;

 private:
  struct PairHash {
    std::size_t operator()(const CellPair& p) const noexcept;
  };
  TimeWindow window_;
  std::unordered_map<CellPair, ExactSum, PairHash> sums_;
};

// I_i = sum over in-window records of (sms_in + sms_out + call_in + call_out
// + internet). `threads` > 1 splits the input into chunks accumulated
// concurrently; the result is bit-identical to the sequential run.
TrafficAggregate aggregate_traffic(std::span<const ActivityRecord> records, TimeWindow window,
                                   unsigned threads = 1);
InteractionAggregate aggregate_interactions(std::span<const InteractionRecord> records,
                                            TimeWindow window, unsigned threads = 1);

// Streaming variants reading straight from disk without materializing records.
TrafficAggregate aggregate_traffic_file(const std::filesystem::path& path, TimeWindow window,
                                        const IngestOptions& options = {},
                                        ParseStats* stats = nullptr);
InteractionAggregate aggregate_interactions_file(const std::filesystem::path& path,
                                                 TimeWindow window,
                                                 const IngestOptions& options = {},
                                                 ParseStats* stats = nullptr);

}  // namespace hotspot::ingest
