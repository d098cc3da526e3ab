#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hotspot/error.hpp"
#include "hotspot/graph.hpp"

namespace hotspot {

enum class Metric { closeness, betweenness, degree, pagerank, eigenvector };

inline constexpr std::array<Metric, 5> kAllMetrics = {
    Metric::closeness, Metric::betweenness, Metric::degree, Metric::pagerank, Metric::eigenvector};

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> metric_from_string(std::string_view name) noexcept;

enum class PageRankVariant {
  weighted,  // mass split in proportion to outgoing edge weight
  literal,   // mass split evenly over out-neighbours, PR(y) / L(y)
};

std::string_view to_string(PageRankVariant variant) noexcept;
std::optional<PageRankVariant> pagerank_variant_from_string(std::string_view name) noexcept;

struct CentralityParams {
  double damping = 0.85;
  double tol = 1e-12;
  int max_iter = 10'000;
  PageRankVariant pagerank_variant = PageRankVariant::weighted;
};

struct CentralityScores {
  Metric metric = Metric::degree;
  std::map<CellId, double> scores;
  // Parameters used, echoed for reproducibility (e.g. "damping", "tol").
  std::map<std::string, double> params;
  // Closeness only: some node reached only part of the graph.
  bool on_component = false;
  // Eigenvector only: the principal eigenvalue.
  std::optional<double> eigenvalue;
  int iterations = 0;
};

// All-pairs weighted shortest paths with path counts, edge weight taken as
// length. Two path lengths tie when they differ by at most kPathTieTolerance
// relative to the larger one.
struct ShortestPathTable {
  std::vector<CellId> nodes;
  std::vector<double> dist;   // n*n row-major, +inf when unreachable
  std::vector<double> sigma;  // n*n row-major, 0 when unreachable

  double distance(CellId u, CellId v) const;
  double paths(CellId u, CellId v) const;
};

inline constexpr double kPathTieTolerance = 1e-9;

ShortestPathTable shortest_paths(const WeightedGraph& g);

// C(x) = 1 / sum of shortest distances to every node x reaches; 0 for a node
// that reaches nothing. Requires an undirected graph with >= 2 nodes.
CentralityScores closeness(const WeightedGraph& g);

// Sum over unordered pairs {s, t} not containing x of the fraction of
// shortest s-t paths through x. Requires an undirected graph with >= 3 nodes.
CentralityScores betweenness(const WeightedGraph& g);

// Weighted degree (node strength). Requires an undirected graph.
CentralityScores degree(const WeightedGraph& g);

// Damped random walk with uniform teleport; dangling nodes spread their mass
// over all nodes. Requires a directed graph. Throws ConvergenceError when
// the L1 change is still above tol after max_iter sweeps.
CentralityScores pagerank(const WeightedGraph& g, const CentralityParams& params = {});

// Principal eigenvector of the weighted adjacency matrix (unit Euclidean
// norm, nonnegative) by power iteration from the uniform vector. Requires a
// connected undirected graph.
CentralityScores eigenvector(const WeightedGraph& g, const CentralityParams& params = {});

struct MetricOutcome {
  Metric metric;
  std::optional<CentralityScores> scores;
  std::optional<ErrorKind> error_kind;
  std::string error;

  bool ok() const noexcept { return scores.has_value(); }
};

// Runs every metric in `metrics` independently on a directed interaction
// graph, symmetrizing where the metric needs it. Failures are captured per
// metric rather than thrown.
std::vector<MetricOutcome> compute_all(const WeightedGraph& directed,
                                       const CentralityParams& params = {},
                                       std::span<const Metric> metrics = kAllMetrics);

// Descending by score, ties by ascending id.
std::vector<std::pair<CellId, double>> rank(const CentralityScores& scores);

}  // namespace hotspot
