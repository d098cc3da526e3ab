#pragma once

// Output formats shared by the CLI commands. Every number is written with
// shortest round-trip precision so reports re-read bit-exactly.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hotspot/centrality.hpp"
#include "hotspot/compare.hpp"
#include "hotspot/hotspot.hpp"
#include "hotspot/ingest.hpp"

namespace hotspot::report {

using nlohmann::json;

inline constexpr const char* kToolName = "hotspot";
inline constexpr const char* kToolVersion = "0.1.0";

// hotspots.csv: "cell_id,intensity", ascending id.
std::string hotspots_csv(const HotspotSet& set);
// Reads hotspots.csv back; returns members with their intensities.
std::map<CellId, double> read_hotspots_csv(const std::filesystem::path& path);

json threshold_json(const HotspotSet& set, std::optional<std::size_t> target_k);

struct Heatmap {
  std::string geojson;
  std::size_t cells_without_geometry = 0;
  std::size_t cells_without_activity = 0;
};

// One feature per cell that has both geometry and in-window activity.
// intensity_norm is min-max scaled over those cells, 0 everywhere when
// max == min.
Heatmap heatmap_geojson(std::span<const ingest::GridCell> grid,
                        const ingest::TrafficAggregate& traffic,
                        const std::optional<std::vector<CellId>>& hotspots);

// centrality.csv: "cell_id,metric,score" for every successful metric.
std::string centrality_csv(std::span<const MetricOutcome> outcomes);
// rankings.csv: "metric,rank,cell_id,score".
std::string rankings_csv(std::span<const MetricOutcome> outcomes);
json centrality_json(std::span<const MetricOutcome> outcomes, const CentralityParams& params);

// Parses centrality.csv; one CentralityScores per metric present.
std::map<Metric, CentralityScores> read_centrality_csv(const std::filesystem::path& path);

json comparison_json(std::span<const ComparisonReport> reports);
// reldiff.csv: "metric,cell_id,week1,week2,rel_diff_pct".
std::string reldiff_csv(std::span<const ComparisonReport> reports);
// corr_diff.csv: "metric,shift,autocorrelation,cross_correlation,diff_pct".
std::string corr_diff_csv(std::span<const ComparisonReport> reports);

// Run manifest written next to every command's outputs.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void input(const std::string& role, const std::filesystem::path& path);
  void config(const std::string& key, json value) { config_[key] = std::move(value); }
  // Records an output written into the command's output directory.
  void output(const std::filesystem::path& path);

  json to_json() const;
  // Writes manifest.json into `dir`.
  void write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  json inputs_ = json::array();
  json config_ = json::object();
  json outputs_ = json::array();
};

inline constexpr const char* kManifestFile = "manifest.json";

}  // namespace hotspot::report
