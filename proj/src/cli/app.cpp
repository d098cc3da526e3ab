#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <sstream>

#include "hotspot/cli.hpp"
#include "hotspot/error.hpp"

namespace hotspot::cli {

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::convergence:
    case ErrorKind::calibration:
      return kDomainFailure;
    case ErrorKind::io:
    case ErrorKind::parse:
    case ErrorKind::usage:
      return kIoOrUsage;
  }
  return kIoOrUsage;
}

std::vector<Metric> parse_metrics(const std::string& list) {
  std::vector<Metric> metrics;
  std::stringstream in(list);
  for (std::string name; std::getline(in, name, ',');) {
    if (name.empty()) continue;
    const auto metric = metric_from_string(name);
    if (!metric) throw UsageError("unknown metric '" + name + "'");
    if (std::find(metrics.begin(), metrics.end(), *metric) == metrics.end()) metrics.push_back(*metric);
  }
  if (metrics.empty()) throw UsageError("--metrics lists no metric");
  return metrics;
}

// Window flags shared by every command that reads timestamped records.
struct WindowFlags {
  std::optional<std::string> start;
  std::optional<std::string> end;

  void attach(CLI::App* cmd) {
    cmd->add_option("--window-start", start, "inclusive window start (epoch ms or ISO date, UTC)");
    cmd->add_option("--window-end", end, "exclusive window end (epoch ms or ISO date, UTC)");
  }

  TimeWindow resolve() const {
    if (!start && !end) return TimeWindow::unbounded();
    if (!start || !end) throw UsageError("--window-start and --window-end go together");
    return TimeWindow(parse_timestamp(*start), parse_timestamp(*end));
  }
};

}  // namespace

void init_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_logger_st("hotspot");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("HOTSPOT_LOG")) {
      spdlog::set_level(spdlog::level::from_str(env));
    }
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  init_logging();

  CLI::App app{"Mobile-traffic hotspot detection and centrality analysis", "hotspot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hotspot 0.1.0");

  SynthOptions synth;
  std::string synth_config;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic city dataset");
  synth_cmd->add_option("--config", synth_config, "key = value generator config")->check(CLI::ExistingFile);
  synth_cmd->add_option("--out", synth.out, "output directory")->required();

  HotspotsOptions hot;
  WindowFlags hot_window;
  auto* hot_cmd = app.add_subcommand("hotspots", "aggregate activity and detect hotspots");
  hot_cmd->add_option("--activity", hot.activity, "activity records (TSV, optionally gzip)")->required();
  hot_cmd->add_option("--grid", hot.grid, "grid GeoJSON; adds heatmap.geojson");
  hot_cmd->add_option("--config", hot.config, "ingest column layout config");
  auto* p_opt = hot_cmd->add_option("--p", hot.p, "threshold fraction in [0, 1]");
  auto* k_opt = hot_cmd->add_option("--k", hot.k, "calibrate the fraction to yield k hotspots");
  p_opt->excludes(k_opt);
  hot_cmd->add_option("--out", hot.out, "output directory")->required();
  hot_window.attach(hot_cmd);

  CentralityOptions cen;
  WindowFlags cen_window;
  std::string metrics;
  std::string variant;
  auto* cen_cmd = app.add_subcommand("centrality", "build the hotspot graph and score it");
  cen_cmd->add_option("--interactions", cen.interactions, "interaction records")->required();
  cen_cmd->add_option("--hotspots", cen.hotspots, "hotspots.csv from the hotspots command")->required();
  cen_cmd->add_option("--config", cen.config, "ingest column layout config");
  cen_cmd->add_option("--damping", cen.params.damping, "PageRank damping factor");
  cen_cmd->add_option("--tol", cen.params.tol, "iterative solver tolerance");
  cen_cmd->add_option("--max-iter", cen.params.max_iter, "iterative solver iteration cap");
  cen_cmd->add_option("--metrics", metrics, "comma-separated subset of closeness,betweenness,degree,pagerank,eigenvector");
  cen_cmd->add_option("--pagerank-variant", variant, "weighted or literal");
  cen_cmd->add_option("--out", cen.out, "output directory")->required();
  cen_window.attach(cen_cmd);

  CompareOptions cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "compare two weeks of centrality scores");
  cmp_cmd->add_option("week1", cmp.week1, "week-1 centrality directory or centrality.csv")->required();
  cmp_cmd->add_option("week2", cmp.week2, "week-2 centrality directory or centrality.csv")->required();
  cmp_cmd->add_option("--out", cmp.out, "output directory")->required();

  HeatmapOptions heat;
  WindowFlags heat_window;
  auto* heat_cmd = app.add_subcommand("heatmap", "export a traffic choropleth");
  heat_cmd->add_option("--activity", heat.activity, "activity records")->required();
  heat_cmd->add_option("--grid", heat.grid, "grid GeoJSON")->required();
  heat_cmd->add_option("--hotspots", heat.hotspots, "hotspots.csv; adds is_hotspot");
  heat_cmd->add_option("--config", heat.config, "ingest column layout config");
  heat_cmd->add_option("--out", heat.out, "output GeoJSON file")->required();
  heat_window.attach(heat_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrUsage;
  }

  try {
    if (*synth_cmd) {
      if (!synth_config.empty()) synth.config = synth_config;
      return cmd_synth(synth, err);
    }
    if (*hot_cmd) {
      hot.window = hot_window.resolve();
      return cmd_hotspots(hot, err);
    }
    if (*cen_cmd) {
      cen.window = cen_window.resolve();
      if (!metrics.empty()) cen.metrics = parse_metrics(metrics);
      if (!variant.empty()) {
        const auto v = pagerank_variant_from_string(variant);
        if (!v) throw UsageError("unknown PageRank variant '" + variant + "'");
        cen.params.pagerank_variant = *v;
      }
      return cmd_centrality(cen, err);
    }
    if (*cmp_cmd) return cmd_compare(cmp, err);
    if (*heat_cmd) {
      heat.window = heat_window.resolve();
      return cmd_heatmap(heat, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrUsage;
  }
  return kIoOrUsage;
}

}  // namespace hotspot::cli
