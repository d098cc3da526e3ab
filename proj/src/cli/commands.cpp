#include <spdlog/spdlog.h>

#include <algorithm>
#include <ostream>
#include <set>

#include "hotspot/cli.hpp"
#include "hotspot/compare.hpp"
#include "hotspot/error.hpp"
#include "hotspot/graph.hpp"
#include "hotspot/hotspot.hpp"
#include "hotspot/ingest.hpp"
#include "hotspot/io.hpp"
#include "hotspot/report.hpp"
#include "hotspot/synth.hpp"

namespace hotspot::cli {

using report::json;

namespace {

void ensure_dir(const path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

void require_file(const path& p, const char* what) {
  if (!std::filesystem::is_regular_file(p)) {
    throw IoError(std::string(what) + " file '" + p.string() + "' does not exist");
  }
}

ingest::IngestOptions ingest_options(const std::optional<path>& config) {
  if (!config) return {};
  require_file(*config, "config");
  return ingest::load_ingest_options(*config);
}

json window_config(const TimeWindow& w) {
  if (w.is_unbounded()) return nullptr;
  return {{"start", w.start()}, {"end", w.end()}};
}

void report_stats(const char* what, const ingest::ParseStats& stats, std::ostream& log) {
  spdlog::info("{}: {} lines, {} records, {} skipped", what, stats.lines, stats.records, stats.skipped);
  if (stats.skipped > 0) {
    log << "warning: " << what << ": skipped " << stats.skipped << " malformed line(s)\n";
  }
}

ingest::TrafficAggregate load_traffic(const path& activity, const TimeWindow& window,
                                      const ingest::IngestOptions& options, std::ostream& log) {
  require_file(activity, "activity");
  ingest::ParseStats stats;
  auto traffic = ingest::aggregate_traffic_file(activity, window, options, &stats);
  report_stats("activity", stats, log);
  if (traffic.intensities.empty()) {
    throw DomainError("no activity records of '" + activity.string() + "' fall inside the window");
  }
  return traffic;
}

// Writes `contents` into dir/name and records it in the manifest.
void emit(const path& dir, const std::string& name, std::string_view contents,
          report::Manifest& manifest) {
  const path target = dir / name;
  io::write_file_atomic(target, contents);
  manifest.output(target);
}

path centrality_file(const path& p) {
  return std::filesystem::is_directory(p) ? p / "centrality.csv" : p;
}

}  // namespace

int cmd_synth(const SynthOptions& options, std::ostream&) {
  synth::SynthConfig cfg;
  report::Manifest manifest("synth");
  if (options.config) {
    require_file(*options.config, "config");
    cfg = synth::load_synth_config(*options.config);
    manifest.input("config", *options.config);
  }
  ensure_dir(options.out);
  const auto city = synth::generate_city(cfg);
  const auto files = synth::write_city(city, options.out);

  manifest.config("grid_side", cfg.grid_side);
  manifest.config("n_centers", cfg.n_centers);
  manifest.config("concentration", cfg.concentration);
  manifest.config("decay_radius", cfg.decay_radius);
  manifest.config("noise", cfg.noise);
  manifest.config("seed", cfg.seed);
  manifest.config("window", window_config(cfg.window));
  manifest.config("records_per_cell", cfg.records_per_cell);
  manifest.config("top_pairs", cfg.top_pairs);
  manifest.config("background", cfg.background);
  manifest.config("origin_lon", cfg.origin_lon);
  manifest.config("origin_lat", cfg.origin_lat);
  manifest.config("cell_size_deg", cfg.cell_size_deg);
  manifest.output(files.activity);
  manifest.output(files.interactions);
  manifest.output(files.grid);
  manifest.write(options.out);
  spdlog::info("synth: wrote {} activity and {} interaction records to {}", city.activity.size(),
               city.interactions.size(), options.out.string());
  return kSuccess;
}

int cmd_hotspots(const HotspotsOptions& options, std::ostream& log) {
  if (options.p.has_value() == options.k.has_value()) {
    throw UsageError("exactly one of --p or --k is required");
  }
  const auto ingest_opts = ingest_options(options.config);
  const auto traffic = load_traffic(options.activity, options.window, ingest_opts, log);
  std::optional<std::vector<ingest::GridCell>> grid;
  if (options.grid) {
    require_file(*options.grid, "grid");
    grid = ingest::parse_grid(*options.grid);
  }

  HotspotSet set;
  if (options.p) {
    set = detect_hotspots(traffic, *options.p);
  } else {
    set = calibrate_p(traffic, *options.k).hotspots;
    if (set.truncated) {
      log << "warning: ties at the threshold; hotspot set truncated to the top " << *options.k
          << " cells by intensity\n";
    }
  }

  ensure_dir(options.out);
  report::Manifest manifest("hotspots");
  manifest.input("activity", options.activity);
  if (options.grid) manifest.input("grid", *options.grid);
  if (options.config) manifest.input("config", *options.config);
  manifest.config("window", window_config(options.window));
  manifest.config("p", options.p ? json(*options.p) : json(nullptr));
  manifest.config("k", options.k ? json(*options.k) : json(nullptr));

  emit(options.out, "hotspots.csv", report::hotspots_csv(set), manifest);
  emit(options.out, "threshold.json", report::threshold_json(set, options.k).dump(2) + "\n", manifest);
  if (grid) {
    const auto heatmap = report::heatmap_geojson(*grid, traffic, set.members);
    if (heatmap.cells_without_geometry > 0) {
      log << "warning: " << heatmap.cells_without_geometry
          << " cell(s) with activity have no grid geometry and were skipped\n";
    }
    emit(options.out, "heatmap.geojson", heatmap.geojson, manifest);
  }
  manifest.write(options.out);
  spdlog::info("hotspots: {} of {} cells at threshold {}", set.members.size(), set.spec.n_areas,
               set.spec.threshold);
  return kSuccess;
}

int cmd_centrality(const CentralityOptions& options, std::ostream& log) {
  if (options.metrics.empty()) throw UsageError("no metrics selected");
  const auto ingest_opts = ingest_options(options.config);
  require_file(options.hotspots, "hotspots");
  require_file(options.interactions, "interactions");

  HotspotSet hotspots;
  hotspots.window = options.window;
  for (const auto& [id, intensity] : report::read_hotspots_csv(options.hotspots)) {
    hotspots.members.push_back(id);
    hotspots.intensities.emplace(id, intensity);
  }

  ingest::ParseStats stats;
  const auto interactions =
      ingest::aggregate_interactions_file(options.interactions, options.window, ingest_opts, &stats);
  report_stats("interactions", stats, log);

  const auto graph = build_graph(interactions, hotspots);
  const auto outcomes = compute_all(graph, options.params, options.metrics);

  ensure_dir(options.out);
  report::Manifest manifest("centrality");
  manifest.input("interactions", options.interactions);
  manifest.input("hotspots", options.hotspots);
  if (options.config) manifest.input("config", *options.config);
  manifest.config("window", window_config(options.window));
  manifest.config("damping", options.params.damping);
  manifest.config("tol", options.params.tol);
  manifest.config("max_iter", options.params.max_iter);
  manifest.config("pagerank_variant", to_string(options.params.pagerank_variant));
  json metric_names = json::array();
  for (Metric m : options.metrics) metric_names.push_back(to_string(m));
  manifest.config("metrics", metric_names);

  emit(options.out, "graph_edges.tsv", format_edge_list(graph), manifest);
  emit(options.out, "centrality.csv", report::centrality_csv(outcomes), manifest);
  emit(options.out, "rankings.csv", report::rankings_csv(outcomes), manifest);
  emit(options.out, "centrality.json",
       report::centrality_json(outcomes, options.params).dump(2) + "\n", manifest);
  manifest.write(options.out);

  std::size_t failed = 0;
  for (const auto& o : outcomes) {
    if (!o.ok()) {
      ++failed;
      log << "warning: " << to_string(o.metric) << " failed: " << o.error << "\n";
    }
  }
  return failed == outcomes.size() ? kDomainFailure : kSuccess;
}

int cmd_compare(const CompareOptions& options, std::ostream& log) {
  const path file1 = centrality_file(options.week1);
  const path file2 = centrality_file(options.week2);
  require_file(file1, "week-1 centrality");
  require_file(file2, "week-2 centrality");
  const auto week1 = report::read_centrality_csv(file1);
  const auto week2 = report::read_centrality_csv(file2);

  std::vector<ComparisonReport> reports;
  for (const auto& [metric, scores1] : week1) {
    const auto it = week2.find(metric);
    if (it == week2.end()) {
      log << "warning: " << to_string(metric) << " missing from week-2 report; skipped\n";
      continue;
    }
    reports.push_back(compare_weeks(scores1, it->second));
  }
  for (const auto& [metric, scores2] : week2) {
    if (!week1.count(metric)) {
      log << "warning: " << to_string(metric) << " missing from week-1 report; skipped\n";
    }
  }
  if (reports.empty()) throw DomainError("the two reports share no metric");

  ensure_dir(options.out);
  report::Manifest manifest("compare");
  manifest.input("week1", file1);
  manifest.input("week2", file2);
  emit(options.out, "comparison.json", report::comparison_json(reports).dump(2) + "\n", manifest);
  emit(options.out, "reldiff.csv", report::reldiff_csv(reports), manifest);
  emit(options.out, "corr_diff.csv", report::corr_diff_csv(reports), manifest);
  manifest.write(options.out);
  return kSuccess;
}

int cmd_heatmap(const HeatmapOptions& options, std::ostream& log) {
  const auto ingest_opts = ingest_options(options.config);
  const auto traffic = load_traffic(options.activity, options.window, ingest_opts, log);
  require_file(options.grid, "grid");
  const auto grid = ingest::parse_grid(options.grid);
  std::optional<std::vector<CellId>> hotspots;
  if (options.hotspots) {
    require_file(*options.hotspots, "hotspots");
    hotspots.emplace();
    for (const auto& [id, v] : report::read_hotspots_csv(*options.hotspots)) hotspots->push_back(id);
  }

  const auto heatmap = report::heatmap_geojson(grid, traffic, hotspots);
  if (heatmap.cells_without_geometry > 0) {
    log << "warning: " << heatmap.cells_without_geometry
        << " cell(s) with activity have no grid geometry and were skipped\n";
  }
  if (heatmap.cells_without_activity > 0) {
    spdlog::info("heatmap: {} grid cell(s) without activity in the window", heatmap.cells_without_activity);
  }

  const path parent = options.out.parent_path().empty() ? path(".") : options.out.parent_path();
  ensure_dir(parent);
  io::write_file_atomic(options.out, heatmap.geojson);

  report::Manifest manifest("heatmap");
  manifest.input("activity", options.activity);
  manifest.input("grid", options.grid);
  if (options.hotspots) manifest.input("hotspots", *options.hotspots);
  if (options.config) manifest.input("config", *options.config);
  manifest.config("window", window_config(options.window));
  manifest.output(options.out);
  const path manifest_path = path(options.out.string() + ".manifest.json");
  io::write_file_atomic(manifest_path, manifest.to_json().dump(2) + "\n");
  return kSuccess;
}

}  // namespace hotspot::cli
