#include "hotspot/graph.hpp"

#include <algorithm>
#include <set>

#include "hotspot/error.hpp"
#include "hotspot/io.hpp"

namespace hotspot {

std::size_t WeightedGraph::index_of(CellId id) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) {
    throw DomainError("cell " + std::to_string(id) + " is not a node of the graph");
  }
  return static_cast<std::size_t>(it - nodes.begin());
}

WeightedGraph build_graph(const ingest::InteractionAggregate& interactions,
                          const HotspotSet& hotspots) {
  if (hotspots.members.empty()) throw DomainError("cannot build a graph over an empty hotspot set");
  WeightedGraph g;
  g.directed = true;
  g.nodes = hotspots.members;
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());

  const auto member = [&](CellId id) { return std::binary_search(g.nodes.begin(), g.nodes.end(), id); };
  for (const auto& [pair, weight] : interactions.strengths) {
    if (pair.first == pair.second || weight <= 0.0) continue;
    if (member(pair.first) && member(pair.second)) g.edges.emplace(pair, weight);
  }
  return g;
}

WeightedGraph symmetrize(const WeightedGraph& g) {
  if (!g.directed) throw DomainError("symmetrize expects a directed graph");
  WeightedGraph out;
  out.directed = false;
  out.nodes = g.nodes;
  for (const auto& [pair, weight] : g.edges) {
    const auto [u, v] = pair;
    if (u > v && g.edges.count({v, u})) continue;  // handled from the (v, u) side
    double total = weight;
    if (auto it = g.edges.find({v, u}); it != g.edges.end()) total += it->second;
    if (total > 0.0) {
      out.edges[{u, v}] = total;
      out.edges[{v, u}] = total;
    }
  }
  return out;
}

Adjacency::Adjacency(const WeightedGraph& g) : out(g.size()) {
  for (const auto& [pair, weight] : g.edges) {
    out[g.index_of(pair.first)].push_back({g.index_of(pair.second), weight});
  }
  // Edge map iterates in (src, dst) order, so each list already ascends.
}

std::string format_edge_list(const WeightedGraph& g) {
  std::string out;
  for (const auto& [pair, weight] : g.edges) {
    out += std::to_string(pair.first);
    out += '\t';
    out += std::to_string(pair.second);
    out += '\t';
    out += io::format_double(weight);
    out += '\n';
  }
  return out;
}

bool is_connected(const WeightedGraph& g) {
  if (g.nodes.size() <= 1) return true;
  const Adjacency adj(g);
  std::vector<std::vector<std::size_t>> both(adj.size());
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (const auto& arc : adj.out[u]) {
      both[u].push_back(arc.to);
      both[arc.to].push_back(u);
    }
  }
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (auto v : both[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == adj.size();
}

}  // namespace hotspot
