#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hotspot/centrality.hpp"
#include "hotspot/types.hpp"

namespace hotspot::cli {

enum ExitCode : int { kSuccess = 0, kDomainFailure = 1, kIoOrUsage = 2 };

using std::filesystem::path;

struct SynthOptions {
  std::optional<path> config;
  path out;
};

struct HotspotsOptions {
  path activity;
  std::optional<path> grid;
  std::optional<path> config;
  TimeWindow window = TimeWindow::unbounded();
  std::optional<double> p;
  std::optional<std::size_t> k;
  path out;
};

struct CentralityOptions {
  path interactions;
  path hotspots;
  std::optional<path> config;
  TimeWindow window = TimeWindow::unbounded();
  CentralityParams params;
  std::vector<Metric> metrics{kAllMetrics.begin(), kAllMetrics.end()};
  path out;
};

struct CompareOptions {
  path week1;  // centrality output directory or its centrality.csv
  path week2;
  path out;
};

struct HeatmapOptions {
  path activity;
  path grid;
  std::optional<path> hotspots;
  std::optional<path> config;
  TimeWindow window = TimeWindow::unbounded();
  path out;  // GeoJSON file
};

// Each command writes its outputs plus a manifest and returns an exit code;
// library errors propagate as hotspot::Error.
int cmd_synth(const SynthOptions& options, std::ostream& log);
int cmd_hotspots(const HotspotsOptions& options, std::ostream& log);
int cmd_centrality(const CentralityOptions& options, std::ostream& log);
int cmd_compare(const CompareOptions& options, std::ostream& log);
int cmd_heatmap(const HeatmapOptions& options, std::ostream& log);

// Parses `args` (without the program name), dispatches, and maps errors onto
// exit codes: 0 success, 1 domain/convergence failure, 2 I/O or usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Applies HOTSPOT_LOG (trace|debug|info|warn|error|off) to the logger.
void init_logging();

}  // namespace hotspot::cli
