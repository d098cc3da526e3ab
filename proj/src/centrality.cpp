#include "hotspot/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "hotspot/kernels.hpp"

namespace hotspot {

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::closeness: return "closeness";
    case Metric::betweenness: return "betweenness";
    case Metric::degree: return "degree";
    case Metric::pagerank: return "pagerank";
    case Metric::eigenvector: return "eigenvector";
  }
  return "unknown";
}

std::optional<Metric> metric_from_string(std::string_view name) noexcept {
  for (Metric m : kAllMetrics) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view to_string(PageRankVariant variant) noexcept {
  return variant == PageRankVariant::weighted ? "weighted" : "literal";
}

std::optional<PageRankVariant> pagerank_variant_from_string(std::string_view name) noexcept {
  if (name == "weighted") return PageRankVariant::weighted;
  if (name == "literal") return PageRankVariant::literal;
  return std::nullopt;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_length(double a, double b) {
  return std::fabs(a - b) <= kPathTieTolerance * std::max(std::fabs(a), std::fabs(b));
}

void require_undirected(const WeightedGraph& g, Metric metric) {
  if (g.directed) {
    throw DomainError(std::string(to_string(metric)) + " expects an undirected (symmetrized) graph");
  }
}

void require_nodes(const WeightedGraph& g, std::size_t n, Metric metric) {
  if (g.size() < n) {
    throw DomainError(std::string(to_string(metric)) + " needs at least " + std::to_string(n) +
                      " nodes, graph has " + std::to_string(g.size()));
  }
}

void require_positive_weights(const WeightedGraph& g) {
  for (const auto& [pair, w] : g.edges) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DomainError("edge " + std::to_string(pair.first) + "->" + std::to_string(pair.second) +
                        " has non-positive weight");
    }
  }
}

// Single-source Dijkstra with shortest-path counting (Brandes' forward phase).
struct SourceSweep {
  std::vector<double> dist;
  std::vector<double> sigma;
  std::vector<std::vector<std::size_t>> preds;
  std::vector<std::size_t> order;  // settled nodes, non-decreasing distance

  SourceSweep(const Adjacency& adj, std::size_t source)
      : dist(adj.size(), kInf), sigma(adj.size(), 0.0), preds(adj.size()) {
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    std::vector<bool> settled(adj.size(), false);
    dist[source] = 0.0;
    sigma[source] = 1.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (settled[u]) continue;
      settled[u] = true;
      order.push_back(u);
      for (const auto& arc : adj.out[u]) {
        const std::size_t v = arc.to;
        if (settled[v]) continue;
        const double candidate = dist[u] + arc.weight;
        if (dist[v] != kInf && same_length(candidate, dist[v])) {
          sigma[v] += sigma[u];
          preds[v].push_back(u);
        } else if (candidate < dist[v]) {
          dist[v] = candidate;
          sigma[v] = sigma[u];
          preds[v].assign(1, u);
          queue.emplace(candidate, v);
        }
      }
    }
  }
};

CentralityScores make_scores(const WeightedGraph& g, Metric metric,
                             const std::vector<double>& values) {
  CentralityScores out;
  out.metric = metric;
  for (std::size_t i = 0; i < g.size(); ++i) out.scores.emplace(g.nodes[i], values[i]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

double ShortestPathTable::distance(CellId u, CellId v) const {
  const auto n = nodes.size();
  const auto iu = static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), u) - nodes.begin());
  const auto iv = static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
  if (iu >= n || iv >= n || nodes[iu] != u || nodes[iv] != v) {
    throw DomainError("node not in shortest-path table");
  }
  return dist[iu * n + iv];
}

double ShortestPathTable::paths(CellId u, CellId v) const {
  const auto n = nodes.size();
  const auto iu = static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), u) - nodes.begin());
  const auto iv = static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
  if (iu >= n || iv >= n || nodes[iu] != u || nodes[iv] != v) {
    throw DomainError("node not in shortest-path table");
  }
  return sigma[iu * n + iv];
}

ShortestPathTable shortest_paths(const WeightedGraph& g) {
  require_positive_weights(g);
  const Adjacency adj(g);
  const std::size_t n = g.size();
  ShortestPathTable table;
  table.nodes = g.nodes;
  table.dist.assign(n * n, kInf);
  table.sigma.assign(n * n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    const SourceSweep sweep(adj, s);
    std::copy(sweep.dist.begin(), sweep.dist.end(), table.dist.begin() + static_cast<std::ptrdiff_t>(s * n));
    std::copy(sweep.sigma.begin(), sweep.sigma.end(), table.sigma.begin() + static_cast<std::ptrdiff_t>(s * n));
  }
  // Opposite sweeps add the same edges in reverse order; pick one rounding.
  if (!g.directed) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = std::min(table.dist[i * n + j], table.dist[j * n + i]);
        table.dist[i * n + j] = table.dist[j * n + i] = d;
      }
    }
  }
  return table;
}

CentralityScores closeness(const WeightedGraph& g) {
  require_undirected(g, Metric::closeness);
  require_nodes(g, 2, Metric::closeness);
  const auto table = shortest_paths(g);
  const std::size_t n = g.size();
  std::vector<double> values(n, 0.0);
  bool partial = false;
  for (std::size_t x = 0; x < n; ++x) {
    double total = 0.0;
    std::size_t reached = 0;
    for (std::size_t y = 0; y < n; ++y) {
      const double d = table.dist[x * n + y];
      if (y == x || d == kInf) continue;
      total += d;
      ++reached;
    }
    if (reached < n - 1) partial = true;
    values[x] = reached == 0 ? 0.0 : 1.0 / total;
  }
  auto out = make_scores(g, Metric::closeness, values);
  out.on_component = partial;
  out.params["tie_tolerance"] = kPathTieTolerance;
  return out;
}

CentralityScores betweenness(const WeightedGraph& g) {
  require_undirected(g, Metric::betweenness);
  require_nodes(g, 3, Metric::betweenness);
  require_positive_weights(g);
  const Adjacency adj(g);
  const std::size_t n = g.size();
  std::vector<double> values(n, 0.0);
  std::vector<double> delta(n);
  for (std::size_t s = 0; s < n; ++s) {
    const SourceSweep sweep(adj, s);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = sweep.order.rbegin(); it != sweep.order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : sweep.preds[w]) {
        delta[v] += sweep.sigma[v] / sweep.sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) values[w] += delta[w];
    }
  }
  // Each unordered pair was visited from both endpoints.
  for (double& v : values) v *= 0.5;
  auto out = make_scores(g, Metric::betweenness, values);
  out.params["tie_tolerance"] = kPathTieTolerance;
  return out;
}

CentralityScores degree(const WeightedGraph& g) {
  require_undirected(g, Metric::degree);
  const Adjacency adj(g);
  std::vector<double> values(g.size(), 0.0);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (const auto& arc : adj.out[u]) values[u] += arc.weight;
  }
  return make_scores(g, Metric::degree, values);
}

CentralityScores pagerank(const WeightedGraph& g, const CentralityParams& params) {
  if (!g.directed) throw DomainError("pagerank expects a directed graph");
  require_nodes(g, 1, Metric::pagerank);
  require_positive_weights(g);
  const double q = params.damping;
  if (!(q > 0.0 && q < 1.0)) throw DomainError("pagerank damping must lie in (0, 1)");
  if (!(params.tol > 0.0)) throw DomainError("pagerank tolerance must be positive");

  const std::size_t n = g.size();
  const Adjacency adj(g);

  // transition[x * n + y]: share of y's mass that flows to x.
  std::vector<double> transition(n * n, 0.0);
  std::vector<std::size_t> dangling;
  for (std::size_t y = 0; y < n; ++y) {
    const auto& arcs = adj.out[y];
    if (arcs.empty()) {
      dangling.push_back(y);
      continue;
    }
    double out_strength = 0.0;
    for (const auto& arc : arcs) out_strength += arc.weight;
    for (const auto& arc : arcs) {
      transition[arc.to * n + y] = params.pagerank_variant == PageRankVariant::weighted
                                       ? arc.weight / out_strength
                                       : 1.0 / static_cast<double>(arcs.size());
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n);
  std::vector<double> next(n);
  double residual = kInf;
  int iter = 0;
  while (iter < params.max_iter) {
    ++iter;
    double dangling_mass = 0.0;
    for (std::size_t y : dangling) dangling_mass += rank[y];
    kernels::matvec(transition, rank, next);
    const double base = (1.0 - q) * inv_n + q * dangling_mass * inv_n;
    for (double& v : next) v = base + q * v;
    residual = kernels::sum_abs_diff(next, rank);
    rank.swap(next);
    if (residual <= params.tol) break;
  }
  if (residual > params.tol) {
    throw ConvergenceError("pagerank did not converge within " + std::to_string(params.max_iter) +
                               " iterations (last L1 change " + std::to_string(residual) + ")",
                           residual, iter);
  }

  auto out = make_scores(g, Metric::pagerank, rank);
  out.iterations = iter;
  out.params["damping"] = q;
  out.params["tol"] = params.tol;
  out.params["max_iter"] = params.max_iter;
  out.params["weighted"] = params.pagerank_variant == PageRankVariant::weighted ? 1.0 : 0.0;
  return out;
}

CentralityScores eigenvector(const WeightedGraph& g, const CentralityParams& params) {
  require_undirected(g, Metric::eigenvector);
  require_nodes(g, 1, Metric::eigenvector);
  require_positive_weights(g);
  if (!(params.tol > 0.0)) throw DomainError("eigenvector tolerance must be positive");
  if (!is_connected(g)) {
    throw DomainError("eigenvector centrality needs a connected graph");
  }

  const std::size_t n = g.size();
  std::vector<double> adjacency(n * n, 0.0);
  std::vector<double> row_sum(n, 0.0);
  for (const auto& [pair, w] : g.edges) {
    const auto u = g.index_of(pair.first);
    adjacency[u * n + g.index_of(pair.second)] = w;
    row_sum[u] += w;
  }

  // Iterating with A + shift*I keeps the eigenvectors but makes the Perron
  // root strictly dominant in magnitude even on bipartite graphs, where plain
  // A has -lambda as well and the iteration would oscillate.
  const double shift = 0.5 * *std::max_element(row_sum.begin(), row_sum.end());

  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  double change = kInf;
  int iter = 0;
  while (n > 1 && iter < params.max_iter) {
    ++iter;
    kernels::matvec(adjacency, x, y);
    for (std::size_t i = 0; i < n; ++i) y[i] += shift * x[i];
    const double norm = std::sqrt(kernels::dot(y, y));
    for (double& v : y) v /= norm;
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += (y[i] - x[i]) * (y[i] - x[i]);
    change = std::sqrt(change);
    x.swap(y);
    if (change <= params.tol) break;
  }
  if (n > 1 && change > params.tol) {
    throw ConvergenceError("eigenvector power iteration did not converge within " +
                               std::to_string(params.max_iter) + " iterations (last change " +
                               std::to_string(change) + ")",
                           change, iter);
  }

  kernels::matvec(adjacency, x, y);
  auto out = make_scores(g, Metric::eigenvector, x);
  out.eigenvalue = kernels::dot(x, y);
  out.iterations = iter;
  out.params["tol"] = params.tol;
  out.params["max_iter"] = params.max_iter;
  return out;
}

std::vector<MetricOutcome> compute_all(const WeightedGraph& directed, const CentralityParams& params,
                                       std::span<const Metric> metrics) {
  std::optional<WeightedGraph> undirected;
  const auto sym = [&]() -> const WeightedGraph& {
    if (!undirected) undirected = symmetrize(directed);
    return *undirected;
  };

  std::vector<MetricOutcome> out;
  for (Metric metric : metrics) {
    MetricOutcome outcome{metric, std::nullopt, std::nullopt, {}};
    try {
      switch (metric) {
        case Metric::closeness: outcome.scores = closeness(sym()); break;
        case Metric::betweenness: outcome.scores = betweenness(sym()); break;
        case Metric::degree: outcome.scores = degree(sym()); break;
        case Metric::pagerank: outcome.scores = pagerank(directed, params); break;
        case Metric::eigenvector: outcome.scores = eigenvector(sym(), params); break;
      }
    } catch (const Error& e) {
      outcome.error_kind = e.kind();
      outcome.error = e.what();
    }
    out.push_back(std::move(outcome));
  }
  return out;
}

std::vector<std::pair<CellId, double>> rank(const CentralityScores& scores) {
  std::vector<std::pair<CellId, double>> out(scores.scores.begin(), scores.scores.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace hotspot
