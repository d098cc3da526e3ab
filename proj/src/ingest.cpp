#include "hotspot/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <thread>

#include <json.hpp>

#include "hotspot/io.hpp"

namespace hotspot::ingest {

// ---------------------------------------------------------------------------
// LineSource: buffered line reader over a plain or gzip file.

class LineSource {
 public:
  explicit LineSource(const std::filesystem::path& path) : path_(path.string()) {
    std::FILE* probe = std::fopen(path_.c_str(), "rb");
    if (!probe) throw IoError("cannot open '" + path_ + "'");
    std::array<unsigned char, 2> magic{};
    const std::size_t got = std::fread(magic.data(), 1, magic.size(), probe);
    const bool gzip = got == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
    if (gzip) {
      std::fclose(probe);
      gz_ = gzopen(path_.c_str(), "rb");
      if (!gz_) throw IoError("cannot open '" + path_ + "'");
      gzbuffer(gz_, 1 << 17);
    } else {
      std::rewind(probe);
      file_ = probe;
    }
    buffer_.resize(1 << 16);
  }

  ~LineSource() {
    if (gz_) gzclose(gz_);
    if (file_) std::fclose(file_);
  }

  LineSource(const LineSource&) = delete;
  LineSource& operator=(const LineSource&) = delete;

  // Returns false at end of input. Strips the trailing "\n" / "\r\n".
  bool next_line(std::string& line) {
    line.clear();
    while (true) {
      if (pos_ == end_) {
        if (eof_) return !line.empty();
        fill();
        continue;
      }
      const char* start = buffer_.data() + pos_;
      const char* stop = static_cast<const char*>(std::memchr(start, '\n', end_ - pos_));
      if (stop) {
        line.append(start, stop);
        pos_ += static_cast<std::size_t>(stop - start) + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
      line.append(start, end_ - pos_);
      pos_ = end_;
    }
  }

 private:
  void fill() {
    pos_ = 0;
    end_ = 0;
    if (gz_) {
      const int n = gzread(gz_, buffer_.data(), static_cast<unsigned>(buffer_.size()));
      if (n < 0) {
        int errnum = 0;
        throw IoError("error decompressing '" + path_ + "': " + gzerror(gz_, &errnum));
      }
      end_ = static_cast<std::size_t>(n);
    } else {
      end_ = std::fread(buffer_.data(), 1, buffer_.size(), file_);
      if (end_ == 0 && std::ferror(file_)) throw IoError("error reading '" + path_ + "'");
    }
    if (end_ == 0) eof_ = true;
  }

  std::string path_;
  std::FILE* file_ = nullptr;
  gzFile gz_ = nullptr;
  std::string buffer_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
};

// ---------------------------------------------------------------------------
// Options

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

char parse_delimiter(std::string_view value, std::size_t line_no) {
  if (value == "tab" || value == "\\t") return '\t';
  if (value == "comma") return ',';
  if (value == "semicolon") return ';';
  if (value == "space") return ' ';
  if (value == "pipe") return '|';
  if (value.size() == 1) return value.front();
  throw ParseError(line_no, "invalid delimiter '" + std::string(value) + "'");
}

}  // namespace

IngestOptions parse_ingest_options(std::string_view text) {
  IngestOptions options;
  auto& a = options.layout.activity;
  auto& r = options.layout.interactions;
  const std::map<std::string, int*, std::less<>> columns = {
      {"activity.cell_id", &a.cell_id},       {"activity.timestamp", &a.timestamp},
      {"activity.country_code", &a.country_code}, {"activity.sms_in", &a.sms_in},
      {"activity.sms_out", &a.sms_out},       {"activity.call_in", &a.call_in},
      {"activity.call_out", &a.call_out},     {"activity.internet", &a.internet},
      {"interactions.src_id", &r.src_id},     {"interactions.dst_id", &r.dst_id},
      {"interactions.timestamp", &r.timestamp}, {"interactions.strength", &r.strength},
  };

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "delimiter") {
      options.layout.delimiter = parse_delimiter(value, line_no);
    } else if (key == "malformed") {
      if (value == "abort") {
        options.policy = MalformedPolicy::abort;
      } else if (value == "skip") {
        options.policy = MalformedPolicy::skip;
      } else {
        throw ParseError(line_no, "malformed must be 'abort' or 'skip'");
      }
    } else if (auto it = columns.find(key); it != columns.end()) {
      int index = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), index);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParseError(line_no, "column index for '" + std::string(key) + "' must be an integer");
      }
      *it->second = index;
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  return options;
}

IngestOptions load_ingest_options(const std::filesystem::path& path) {
  return parse_ingest_options(io::read_file(path));
}

// ---------------------------------------------------------------------------
// Line parsing

namespace {

class Fields {
 public:
  Fields(std::string_view line, char delimiter) {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(delimiter, start);
      if (pos == std::string_view::npos) {
        fields_.push_back(line.substr(start));
        break;
      }
      fields_.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
  }

  // Empty view for absent columns.
  std::string_view at(int index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= fields_.size()) return {};
    return trim(fields_[static_cast<std::size_t>(index)]);
  }

 private:
  std::vector<std::string_view> fields_;
};

template <typename Int>
Int parse_int_field(std::string_view text, std::string_view name, std::size_t line_no) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(line_no, "invalid " + std::string(name) + " '" + std::string(text) + "'");
  }
  return value;
}

CellId parse_cell_id(std::string_view text, std::string_view name, std::size_t line_no) {
  const auto id = parse_int_field<CellId>(text, name, line_no);
  if (id == 0) throw ParseError(line_no, std::string(name) + " must be positive");
  return id;
}

double parse_quantity(std::string_view text, std::string_view name, std::size_t line_no) {
  if (text.empty()) return 0.0;
  const auto value = io::parse_double(text);
  if (!value) {
    throw ParseError(line_no, "invalid " + std::string(name) + " '" + std::string(text) + "'");
  }
  if (*value < 0.0) {
    throw ParseError(line_no, std::string(name) + " must be nonnegative, got " + std::string(text));
  }
  return *value;
}

std::string join_columns(std::vector<std::pair<int, std::string>> cells, char delimiter) {
  int width = 0;
  for (const auto& [index, text] : cells) width = std::max(width, index + 1);
  std::vector<std::string> row(static_cast<std::size_t>(width));
  for (auto& [index, text] : cells) {
    if (index >= 0) row[static_cast<std::size_t>(index)] = std::move(text);
  }
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(delimiter);
    out += row[i];
  }
  return out;
}

std::string quantity_text(double v) { return v == 0.0 ? std::string{} : io::format_double(v); }

}  // namespace

ActivityRecord parse_activity_line(std::string_view line, const ColumnLayout& layout,
                                   std::size_t line_no) {
  const Fields f(line, layout.delimiter);
  const auto& c = layout.activity;
  ActivityRecord r;
  r.cell_id = parse_cell_id(f.at(c.cell_id), "cell_id", line_no);
  r.timestamp = parse_int_field<EpochMillis>(f.at(c.timestamp), "timestamp", line_no);
  if (const auto cc = f.at(c.country_code); !cc.empty()) {
    r.country_code = parse_int_field<int>(cc, "country_code", line_no);
  }
  r.sms_in = parse_quantity(f.at(c.sms_in), "sms_in", line_no);
  r.sms_out = parse_quantity(f.at(c.sms_out), "sms_out", line_no);
  r.call_in = parse_quantity(f.at(c.call_in), "call_in", line_no);
  r.call_out = parse_quantity(f.at(c.call_out), "call_out", line_no);
  r.internet = parse_quantity(f.at(c.internet), "internet", line_no);
  return r;
}

InteractionRecord parse_interaction_line(std::string_view line, const ColumnLayout& layout,
                                         std::size_t line_no) {
  const Fields f(line, layout.delimiter);
  const auto& c = layout.interactions;
  InteractionRecord r;
  r.src_id = parse_cell_id(f.at(c.src_id), "src_id", line_no);
  r.dst_id = parse_cell_id(f.at(c.dst_id), "dst_id", line_no);
  r.timestamp = parse_int_field<EpochMillis>(f.at(c.timestamp), "timestamp", line_no);
  r.strength = parse_quantity(f.at(c.strength), "strength", line_no);
  return r;
}

std::string format_activity_line(const ActivityRecord& r, const ColumnLayout& layout) {
  const auto& c = layout.activity;
  return join_columns({{c.cell_id, std::to_string(r.cell_id)},
                       {c.timestamp, std::to_string(r.timestamp)},
                       {c.country_code, std::to_string(r.country_code)},
                       {c.sms_in, quantity_text(r.sms_in)},
                       {c.sms_out, quantity_text(r.sms_out)},
                       {c.call_in, quantity_text(r.call_in)},
                       {c.call_out, quantity_text(r.call_out)},
                       {c.internet, quantity_text(r.internet)}},
                      layout.delimiter);
}

std::string format_interaction_line(const InteractionRecord& r, const ColumnLayout& layout) {
  const auto& c = layout.interactions;
  return join_columns({{c.src_id, std::to_string(r.src_id)},
                       {c.dst_id, std::to_string(r.dst_id)},
                       {c.timestamp, std::to_string(r.timestamp)},
                       {c.strength, io::format_double(r.strength)}},
                      layout.delimiter);
}

// ---------------------------------------------------------------------------
// Readers

namespace {

template <typename Record, typename ParseLine>
std::optional<Record> read_next(LineSource& source, const IngestOptions& options,
                                ParseStats& stats, ParseLine parse_line) {
  std::string line;
  while (source.next_line(line)) {
    const std::size_t line_no = ++stats.lines;
    if (trim(line).empty()) continue;
    try {
      Record record = parse_line(line, options.layout, line_no);
      ++stats.records;
      return record;
    } catch (const ParseError&) {
      if (options.policy == MalformedPolicy::abort) throw;
      ++stats.skipped;
    }
  }
  return std::nullopt;
}

}  // namespace

ActivityReader::ActivityReader(const std::filesystem::path& path, IngestOptions options)
    : source_(std::make_unique<LineSource>(path)), options_(options) {}
ActivityReader::~ActivityReader() = default;
ActivityReader::ActivityReader(ActivityReader&&) noexcept = default;
ActivityReader& ActivityReader::operator=(ActivityReader&&) noexcept = default;

std::optional<ActivityRecord> ActivityReader::next() {
  return read_next<ActivityRecord>(*source_, options_, stats_, parse_activity_line);
}

InteractionReader::InteractionReader(const std::filesystem::path& path, IngestOptions options)
    : source_(std::make_unique<LineSource>(path)), options_(options) {}
InteractionReader::~InteractionReader() = default;
InteractionReader::InteractionReader(InteractionReader&&) noexcept = default;
InteractionReader& InteractionReader::operator=(InteractionReader&&) noexcept = default;

std::optional<InteractionRecord> InteractionReader::next() {
  return read_next<InteractionRecord>(*source_, options_, stats_, parse_interaction_line);
}

std::vector<ActivityRecord> parse_activity(const std::filesystem::path& path,
                                           const IngestOptions& options, ParseStats* stats) {
  ActivityReader reader(path, options);
  std::vector<ActivityRecord> out;
  while (auto r = reader.next()) out.push_back(*r);
  if (stats) *stats = reader.stats();
  return out;
}

std::vector<InteractionRecord> parse_interactions(const std::filesystem::path& path,
                                                  const IngestOptions& options, ParseStats* stats) {
  InteractionReader reader(path, options);
  std::vector<InteractionRecord> out;
  while (auto r = reader.next()) out.push_back(*r);
  if (stats) *stats = reader.stats();
  return out;
}

// ---------------------------------------------------------------------------
// Grid

namespace {

using nlohmann::json;

std::optional<CellId> id_from_json(const json& value) {
  if (value.is_number_unsigned()) return value.get<CellId>();
  if (value.is_number_integer() && value.get<std::int64_t>() > 0) {
    return static_cast<CellId>(value.get<std::int64_t>());
  }
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    CellId id = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return id;
  }
  return std::nullopt;
}

CellId feature_cell_id(const json& feature, std::size_t index) {
  static constexpr std::array<const char*, 4> kKeys = {"cellId", "cell_id", "square_id", "id"};
  if (const auto props = feature.find("properties"); props != feature.end() && props->is_object()) {
    for (const char* key : kKeys) {
      if (auto it = props->find(key); it != props->end()) {
        if (auto id = id_from_json(*it); id && *id > 0) return *id;
        throw DomainError("feature " + std::to_string(index) + ": property '" + key +
                          "' is not a positive integer id");
      }
    }
  }
  if (auto it = feature.find("id"); it != feature.end()) {
    if (auto id = id_from_json(*it); id && *id > 0) return *id;
  }
  throw DomainError("feature " + std::to_string(index) + " has no cell id property");
}

}  // namespace

std::vector<GridCell> parse_grid_text(std::string_view geojson) {
  json doc;
  try {
    doc = json::parse(geojson);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("invalid GeoJSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError(0, "invalid GeoJSON: expected a FeatureCollection with a features array");
  }

  std::vector<GridCell> cells;
  std::set<CellId> seen;
  std::size_t index = 0;
  for (const auto& feature : doc["features"]) {
    if (!feature.is_object() || !feature.contains("geometry") || !feature["geometry"].is_object()) {
      throw ParseError(0, "invalid GeoJSON: feature " + std::to_string(index) + " has no geometry");
    }
    const auto& geometry = feature["geometry"];
    const std::string type = geometry.value("type", "");
    if (type != "Polygon") {
      throw UnsupportedGeometryError("unsupported geometry '" + type + "' in feature " +
                                     std::to_string(index) + " (only Polygon is supported)");
    }
    GridCell cell;
    cell.cell_id = feature_cell_id(feature, index);
    if (!seen.insert(cell.cell_id).second) {
      throw DomainError("duplicate cell id " + std::to_string(cell.cell_id) + " in grid");
    }
    try {
      const auto& ring = geometry.at("coordinates").at(0);
      for (const auto& point : ring) {
        cell.polygon.emplace_back(point.at(0).get<double>(), point.at(1).get<double>());
      }
    } catch (const json::exception& e) {
      throw ParseError(0, "invalid GeoJSON: polygon coordinates of cell " +
                              std::to_string(cell.cell_id) + ": " + e.what());
    }
    if (cell.polygon.size() < 4 || cell.polygon.front() != cell.polygon.back()) {
      throw DomainError("cell " + std::to_string(cell.cell_id) +
                        ": polygon ring must be closed with at least 4 points");
    }
    cells.push_back(std::move(cell));
    ++index;
  }
  return cells;
}

std::vector<GridCell> parse_grid(const std::filesystem::path& path) {
  return parse_grid_text(io::read_file(path));
}

std::string format_grid(std::span<const GridCell> cells) {
  json features = json::array();
  for (const auto& cell : cells) {
    json ring = json::array();
    for (const auto& [lon, lat] : cell.polygon) ring.push_back({lon, lat});
    features.push_back({{"type", "Feature"},
                        {"id", cell.cell_id},
                        {"properties", {{"cellId", cell.cell_id}}},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}}});
  }
  json doc = {{"type", "FeatureCollection"},
              {"crs", {{"type", "name"}, {"properties", {{"name", "urn:ogc:def:crs:OGC:1.3:CRS84"}}}}},
              {"features", std::move(features)}};
  return doc.dump() + "\n";
}

// ---------------------------------------------------------------------------
// Aggregation

void TrafficAccumulator::add(const ActivityRecord& r) {
  if (!window_.contains(r.timestamp)) return;
  auto& sum = sums_[r.cell_id];
  sum.add(r.sms_in);
  sum.add(r.sms_out);
  sum.add(r.call_in);
  sum.add(r.call_out);
  sum.add(r.internet);
}

void TrafficAccumulator::merge(const TrafficAccumulator& other) {
  for (const auto& [cell, sum] : other.sums_) sums_[cell].merge(sum);
}

TrafficAggregate TrafficAccumulator::finish() const {
  TrafficAggregate out;
  out.window = window_;
  for (const auto& [cell, sum] : sums_) out.intensities.emplace(cell, sum.value());
  return out;
}

std::size_t InteractionAccumulator::PairHash::operator()(const CellPair& p) const noexcept {
  return std::hash<CellId>{}(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
}

void InteractionAccumulator::add(const InteractionRecord& r) {
  if (!window_.contains(r.timestamp)) return;
  sums_[{r.src_id, r.dst_id}].add(r.strength);
}

void InteractionAccumulator::merge(const InteractionAccumulator& other) {
  for (const auto& [pair, sum] : other.sums_) sums_[pair].merge(sum);
}

InteractionAggregate InteractionAccumulator::finish() const {
  InteractionAggregate out;
  out.window = window_;
  for (const auto& [pair, sum] : sums_) {
    const double total = sum.value();
    if (total > 0.0) out.strengths.emplace(pair, total);
  }
  return out;
}

namespace {

template <typename Accumulator, typename Record>
Accumulator accumulate_chunks(std::span<const Record> records, TimeWindow window,
                              unsigned threads) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(records.size() / 4096 + 1)));
  if (threads == 1) {
    Accumulator acc(window);
    for (const auto& r : records) acc.add(r);
    return acc;
  }
  std::vector<Accumulator> partial(threads, Accumulator(window));
  std::vector<std::thread> workers;
  const std::size_t chunk = (records.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(records.size(), t * chunk);
    const std::size_t end = std::min(records.size(), begin + chunk);
    workers.emplace_back([&, t, begin, end] {
      for (std::size_t i = begin; i < end; ++i) partial[t].add(records[i]);
    });
  }
  for (auto& w : workers) w.join();
  for (unsigned t = 1; t < threads; ++t) partial[0].merge(partial[t]);
  return std::move(partial[0]);
}

}  // namespace

TrafficAggregate aggregate_traffic(std::span<const ActivityRecord> records, TimeWindow window,
                                   unsigned threads) {
  return accumulate_chunks<TrafficAccumulator>(records, window, threads).finish();
}

InteractionAggregate aggregate_interactions(std::span<const InteractionRecord> records,
                                            TimeWindow window, unsigned threads) {
  return accumulate_chunks<InteractionAccumulator>(records, window, threads).finish();
}

TrafficAggregate aggregate_traffic_file(const std::filesystem::path& path, TimeWindow window,
                                        const IngestOptions& options, ParseStats* stats) {
  ActivityReader reader(path, options);
  TrafficAccumulator acc(window);
  while (auto r = reader.next()) acc.add(*r);
  if (stats) *stats = reader.stats();
  return acc.finish();
}

InteractionAggregate aggregate_interactions_file(const std::filesystem::path& path,
                                                 TimeWindow window, const IngestOptions& options,
                                                 ParseStats* stats) {
  InteractionReader reader(path, options);
  InteractionAccumulator acc(window);
  while (auto r = reader.next()) acc.add(*r);
  if (stats) *stats = reader.stats();
  return acc.finish();
}

}  // namespace hotspot::ingest
