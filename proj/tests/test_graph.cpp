#include <doctest.h>

#include <random>

#include "hotspot/error.hpp"
#include "hotspot/graph.hpp"

using namespace hotspot;

namespace {

HotspotSet members(std::vector<CellId> ids) {
  HotspotSet set;
  set.members = std::move(ids);
  return set;
}

ingest::InteractionAggregate strengths(std::map<CellPair, double> s) {
  ingest::InteractionAggregate agg;
  agg.strengths = std::move(s);
  return agg;
}

}  // namespace

TEST_CASE("build_graph keeps only hotspot pairs") {
  const auto g = build_graph(strengths({{{1, 2}, 3.0}, {{2, 1}, 1.0}, {{1, 9}, 5.0}}), members({1, 2}));
  CHECK(g.directed);
  CHECK(g.nodes == std::vector<CellId>{1, 2});
  CHECK(g.edges == std::map<CellPair, double>{{{1, 2}, 3.0}, {{2, 1}, 1.0}});
}

TEST_CASE("build_graph drops self-loops and tolerates no edges") {
  CHECK(build_graph(strengths({{{1, 1}, 7.0}}), members({1})).edges.empty());
  const auto g = build_graph(strengths({}), members({4, 2}));
  CHECK(g.nodes == std::vector<CellId>{2, 4});
  CHECK(g.edges.empty());
  CHECK_THROWS_AS(build_graph(strengths({}), members({})), DomainError);
}

TEST_CASE("symmetrize sums the two directions") {
  WeightedGraph g;
  g.nodes = {1, 2};
  g.edges = {{{1, 2}, 3.0}, {{2, 1}, 1.0}};
  const auto u = symmetrize(g);
  CHECK_FALSE(u.directed);
  CHECK(u.edges == std::map<CellPair, double>{{{1, 2}, 4.0}, {{2, 1}, 4.0}});

  g.edges = {{{1, 2}, 3.0}};
  CHECK(symmetrize(g).edges == std::map<CellPair, double>{{{1, 2}, 3.0}, {{2, 1}, 3.0}});

  g.edges.clear();
  CHECK(symmetrize(g).edges.empty());
  CHECK_THROWS_AS(symmetrize(u), DomainError);
}

TEST_CASE("property: symmetrized weight is the sum of both directions") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> w(0.1, 5.0);
  std::bernoulli_distribution has(0.4);
  for (int trial = 0; trial < 100; ++trial) {
    WeightedGraph g;
    for (CellId id = 1; id <= 7; ++id) g.nodes.push_back(id * 3);
    for (CellId a : g.nodes)
      for (CellId b : g.nodes)
        if (a != b && has(rng)) g.edges[{a, b}] = w(rng);
    const auto u = symmetrize(g);
    for (CellId a : g.nodes) {
      for (CellId b : g.nodes) {
        if (a == b) continue;
        const double ab = g.edges.count({a, b}) ? g.edges.at({a, b}) : 0.0;
        const double ba = g.edges.count({b, a}) ? g.edges.at({b, a}) : 0.0;
        if (ab + ba > 0) {
          CHECK(u.edges.at({a, b}) == ab + ba);
          CHECK(u.edges.at({a, b}) == u.edges.at({b, a}));
        } else {
          CHECK_FALSE(u.edges.count({a, b}));
        }
      }
    }
  }
}

TEST_CASE("build_graph is independent of aggregate record order") {
  std::vector<ingest::InteractionRecord> records = {
      {1, 2, 1, 0.1}, {2, 3, 2, 0.2}, {1, 2, 3, 0.7}, {3, 1, 4, 1e-17}, {2, 1, 5, 3.0}};
  const TimeWindow w(0, 10);
  const auto g1 = build_graph(ingest::aggregate_interactions(records, w), members({1, 2, 3}));
  std::reverse(records.begin(), records.end());
  const auto g2 = build_graph(ingest::aggregate_interactions(records, w), members({1, 2, 3}));
  CHECK(g1.edges == g2.edges);
}

TEST_CASE("adjacency, connectivity and edge list") {
  WeightedGraph g;
  g.nodes = {1, 2, 3};
  g.edges = {{{1, 2}, 1.5}, {{2, 1}, 1.5}};
  g.directed = false;
  CHECK_FALSE(is_connected(g));
  g.edges[{2, 3}] = 2.0;
  g.edges[{3, 2}] = 2.0;
  CHECK(is_connected(g));

  const Adjacency adj(g);
  REQUIRE(adj.size() == 3);
  CHECK(adj.out[1].size() == 2);
  CHECK(adj.out[1][0].to == 0);
  CHECK(adj.out[1][1].to == 2);
  CHECK(g.index_of(3) == 2);
  CHECK_THROWS(g.index_of(99));

  CHECK(format_edge_list(g) == "1\t2\t1.5\n2\t1\t1.5\n2\t3\t2\n3\t2\t2\n");
}
