#include "hotspot/report.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>
#include <sstream>

#include "hotspot/error.hpp"
#include "hotspot/io.hpp"

namespace hotspot::report {

using io::format_double;

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename Fn>
void for_each_data_line(const std::filesystem::path& path, std::string_view expected_header, Fn fn) {
  const std::string text = io::read_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != expected_header) {
        throw ParseError(1, path.string() + ": expected header '" + std::string(expected_header) + "'");
      }
      continue;
    }
    fn(split_csv(line), line_no);
  }
}

CellId parse_id(std::string_view text, std::size_t line_no) {
  CellId id = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || id == 0) {
    throw ParseError(line_no, "invalid cell id '" + std::string(text) + "'");
  }
  return id;
}

double parse_number(std::string_view text, std::size_t line_no) {
  const auto v = io::parse_double(text);
  if (!v) throw ParseError(line_no, "invalid number '" + std::string(text) + "'");
  return *v;
}

json window_json(const TimeWindow& w) {
  if (w.is_unbounded()) return nullptr;
  return {{"start", w.start()}, {"end", w.end()}};
}

json dispersion_json(const Dispersion& d) {
  return {{"mean", d.mean}, {"variance", d.variance}, {"cv", d.cv ? json(*d.cv) : json(nullptr)}};
}

}  // namespace

std::string hotspots_csv(const HotspotSet& set) {
  std::string out = "cell_id,intensity\n";
  for (CellId id : set.members) {
    out += std::to_string(id);
    out += ',';
    out += format_double(set.intensities.at(id));
    out += '\n';
  }
  return out;
}

std::map<CellId, double> read_hotspots_csv(const std::filesystem::path& path) {
  std::map<CellId, double> out;
  for_each_data_line(path, "cell_id,intensity", [&](const auto& f, std::size_t line_no) {
    if (f.size() != 2) throw ParseError(line_no, "expected 2 columns in " + path.string());
    const CellId id = parse_id(f[0], line_no);
    if (!out.emplace(id, parse_number(f[1], line_no)).second) {
      throw ParseError(line_no, "duplicate hotspot id " + std::to_string(id));
    }
  });
  return out;
}

json threshold_json(const HotspotSet& set, std::optional<std::size_t> target_k) {
  const auto& s = set.spec;
  json out = {{"p", s.p},
              {"mean_intensity", s.mean_intensity},
              {"max_traffic", s.max_traffic},
              {"delta", s.delta},
              {"threshold", s.threshold},
              {"n_areas", s.n_areas},
              {"hotspot_count", set.members.size()},
              {"truncated", set.truncated},
              {"window", window_json(set.window)}};
  out["target_k"] = target_k ? json(*target_k) : json(nullptr);
  return out;
}

Heatmap heatmap_geojson(std::span<const ingest::GridCell> grid,
                        const ingest::TrafficAggregate& traffic,
                        const std::optional<std::vector<CellId>>& hotspots) {
  Heatmap result;
  std::map<CellId, const ingest::GridCell*> geometry;
  for (const auto& cell : grid) geometry.emplace(cell.cell_id, &cell);

  std::vector<std::pair<const ingest::GridCell*, double>> cells;
  for (const auto& [id, intensity] : traffic.intensities) {
    const auto it = geometry.find(id);
    if (it == geometry.end()) {
      ++result.cells_without_geometry;
      continue;
    }
    cells.emplace_back(it->second, intensity);
  }
  for (const auto& cell : grid) {
    if (!traffic.intensities.count(cell.cell_id)) ++result.cells_without_activity;
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& [cell, v] : cells) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::set<CellId> hot;
  if (hotspots) hot.insert(hotspots->begin(), hotspots->end());

  json features = json::array();
  for (const auto& [cell, v] : cells) {
    json ring = json::array();
    for (const auto& [lon, lat] : cell->polygon) ring.push_back({lon, lat});
    json props = {{"cell_id", cell->cell_id},
                  {"intensity", v},
                  {"intensity_norm", hi > lo ? (v - lo) / (hi - lo) : 0.0}};
    if (hotspots) props["is_hotspot"] = hot.count(cell->cell_id) > 0;
    features.push_back({{"type", "Feature"},
                        {"properties", std::move(props)},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}}});
  }
  json doc = {{"type", "FeatureCollection"},
              {"properties",
               {{"normalization",
                 "intensity_norm = (intensity - min) / (max - min) over the emitted cells; "
                 "0 for every cell when max == min"},
                {"window", window_json(traffic.window)},
                {"cells_without_geometry", result.cells_without_geometry},
                {"cells_without_activity", result.cells_without_activity}}},
              {"features", std::move(features)}};
  result.geojson = doc.dump() + "\n";
  return result;
}

std::string centrality_csv(std::span<const MetricOutcome> outcomes) {
  std::string out = "cell_id,metric,score\n";
  for (const auto& o : outcomes) {
    if (!o.ok()) continue;
    for (const auto& [id, score] : o.scores->scores) {
      out += std::to_string(id);
      out += ',';
      out += to_string(o.metric);
      out += ',';
      out += format_double(score);
      out += '\n';
    }
  }
  return out;
}

std::string rankings_csv(std::span<const MetricOutcome> outcomes) {
  std::string out = "metric,rank,cell_id,score\n";
  for (const auto& o : outcomes) {
    if (!o.ok()) continue;
    std::size_t position = 0;
    for (const auto& [id, score] : rank(*o.scores)) {
      out += to_string(o.metric);
      out += ',';
      out += std::to_string(++position);
      out += ',';
      out += std::to_string(id);
      out += ',';
      out += format_double(score);
      out += '\n';
    }
  }
  return out;
}

json centrality_json(std::span<const MetricOutcome> outcomes, const CentralityParams& params) {
  json metrics = json::object();
  for (const auto& o : outcomes) {
    json entry;
    if (o.ok()) {
      const auto& s = *o.scores;
      entry["status"] = "ok";
      json scores = json::object();
      for (const auto& [id, v] : s.scores) scores[std::to_string(id)] = v;
      entry["scores"] = std::move(scores);
      entry["params"] = s.params;
      entry["iterations"] = s.iterations;
      if (s.eigenvalue) entry["eigenvalue"] = *s.eigenvalue;
      if (s.metric == Metric::closeness) entry["computed_on_component"] = s.on_component;
    } else {
      entry["status"] = "failed";
      entry["error_kind"] = to_string(*o.error_kind);
      entry["error"] = o.error;
    }
    metrics[std::string(to_string(o.metric))] = std::move(entry);
  }
  return {{"params",
           {{"damping", params.damping},
            {"tol", params.tol},
            {"max_iter", params.max_iter},
            {"pagerank_variant", to_string(params.pagerank_variant)}}},
          {"metrics", std::move(metrics)}};
}

std::map<Metric, CentralityScores> read_centrality_csv(const std::filesystem::path& path) {
  std::map<Metric, CentralityScores> out;
  for_each_data_line(path, "cell_id,metric,score", [&](const auto& f, std::size_t line_no) {
    if (f.size() != 3) throw ParseError(line_no, "expected 3 columns in " + path.string());
    const CellId id = parse_id(f[0], line_no);
    const auto metric = metric_from_string(f[1]);
    if (!metric) throw ParseError(line_no, "unknown metric '" + std::string(f[1]) + "'");
    auto& scores = out[*metric];
    scores.metric = *metric;
    if (!scores.scores.emplace(id, parse_number(f[2], line_no)).second) {
      throw ParseError(line_no, "duplicate score for cell " + std::to_string(id));
    }
  });
  return out;
}

json comparison_json(std::span<const ComparisonReport> reports) {
  json metrics = json::object();
  for (const auto& r : reports) {
    json rel = json::object();
    for (const auto& [id, pct] : r.per_node_rel_diff_pct) rel[std::to_string(id)] = pct;
    metrics[std::string(to_string(r.metric))] = {
        {"nodes", r.week1.ordering},
        {"week1", r.week1.values},
        {"week2", r.week2.values},
        {"per_node_rel_diff_pct", std::move(rel)},
        {"zero_baseline_nodes", r.zero_baseline},
        {"max_rel_diff_pct",
         r.per_node_rel_diff_pct.empty()
             ? json(nullptr)
             : json(std::max_element(r.per_node_rel_diff_pct.begin(), r.per_node_rel_diff_pct.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; })
                        ->second)},
        {"autocorrelation", {{"shifts", r.autocorr.shifts}, {"values", r.autocorr.values}}},
        {"cross_correlation", {{"shifts", r.cross.shifts}, {"values", r.cross.values}}},
        {"auto_cross_diff_pct",
         {{"shifts", r.auto_cross_diff.shifts},
          {"percent", r.auto_cross_diff.percent},
          {"omitted_shifts", r.auto_cross_diff.omitted}}},
        {"dispersion", {{"week1", dispersion_json(r.dispersion_week1)},
                        {"week2", dispersion_json(r.dispersion_week2)}}}};
  }
  return {{"metrics", std::move(metrics)}};
}

std::string reldiff_csv(std::span<const ComparisonReport> reports) {
  std::string out = "metric,cell_id,week1,week2,rel_diff_pct\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.week1.ordering.size(); ++i) {
      const CellId id = r.week1.ordering[i];
      const auto it = r.per_node_rel_diff_pct.find(id);
      out += to_string(r.metric);
      out += ',' + std::to_string(id);
      out += ',' + format_double(r.week1.values[i]);
      out += ',' + format_double(r.week2.values[i]);
      out += ',';
      if (it != r.per_node_rel_diff_pct.end()) out += format_double(it->second);
      out += '\n';
    }
  }
  return out;
}

std::string corr_diff_csv(std::span<const ComparisonReport> reports) {
  std::string out = "metric,shift,autocorrelation,cross_correlation,diff_pct\n";
  for (const auto& r : reports) {
    const auto& d = r.auto_cross_diff;
    for (std::size_t i = 0; i < d.shifts.size(); ++i) {
      const int shift = d.shifts[i];
      out += to_string(r.metric);
      out += ',' + std::to_string(shift);
      out += ',' + format_double(r.autocorr.at(shift));
      out += ',' + format_double(r.cross.at(shift));
      out += ',' + format_double(d.percent[i]);
      out += '\n';
    }
  }
  return out;
}

void Manifest::input(const std::string& role, const std::filesystem::path& path) {
  inputs_.push_back({{"role", role}, {"path", path.string()}, {"sha256", io::sha256_file(path)}});
}

void Manifest::output(const std::filesystem::path& path) {
  outputs_.push_back({{"path", path.filename().string()}, {"sha256", io::sha256_file(path)}});
}

json Manifest::to_json() const {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"command", command_},
          {"inputs", inputs_},
          {"config", config_},
          {"outputs", outputs_}};
}

void Manifest::write(const std::filesystem::path& dir) const {
  io::write_file_atomic(dir / kManifestFile, to_json().dump(2) + "\n");
}

}  // namespace hotspot::report
