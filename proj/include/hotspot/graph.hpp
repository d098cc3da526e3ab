#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hotspot/hotspot.hpp"
#include "hotspot/ingest.hpp"

namespace hotspot {

// Interaction graph over hotspot cells. Nodes are kept in ascending id order;
// an undirected graph stores each edge in both directions with equal weight.
struct WeightedGraph {
  std::vector<CellId> nodes;
  std::map<CellPair, double> edges;
  bool directed = true;

  std::size_t size() const noexcept { return nodes.size(); }
  // Position of `id` in `nodes`; throws DomainError if absent.
  std::size_t index_of(CellId id) const;
};

// Restricts the aggregated strengths to ordered pairs inside the hotspot set,
// dropping self-loops. Throws DomainError for an empty hotspot set.
WeightedGraph build_graph(const ingest::InteractionAggregate& interactions,
                          const HotspotSet& hotspots);

// weight{u,v} = w(u->v) + w(v->u). Throws DomainError on undirected input.
WeightedGraph symmetrize(const WeightedGraph& g);

// Dense adjacency list keyed by node position; neighbours ascend by position.
struct Adjacency {
  struct Arc {
    std::size_t to;
    double weight;
  };
  std::vector<std::vector<Arc>> out;

  explicit Adjacency(const WeightedGraph& g);
  std::size_t size() const noexcept { return out.size(); }
};

// One "src<TAB>dst<TAB>weight" line per stored edge.
std::string format_edge_list(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

}  // namespace hotspot
