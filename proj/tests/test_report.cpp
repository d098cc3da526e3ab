#include <doctest.h>

#include "hotspot/io.hpp"
#include "hotspot/report.hpp"
#include "temp_dir.hpp"

using namespace hotspot;
using namespace hotspot::report;

namespace {

ingest::GridCell square(CellId id, double x) {
  return {id, {{x, 0}, {x + 1, 0}, {x + 1, 1}, {x, 1}, {x, 0}}};
}

}  // namespace

TEST_CASE("doubles print shortest and parse back exactly") {
  for (double v : {0.1, 1.0 / 3, 5e-324, 1e300, 0.0, 123456789.125}) {
    CHECK(*io::parse_double(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.25) == "0.25");
  CHECK_FALSE(io::parse_double("inf").has_value());
  CHECK_FALSE(io::parse_double("1.5x").has_value());
  CHECK(*io::parse_double("+2") == 2.0);
}

TEST_CASE("sha256 of a known string") {
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("heatmap normalization on three cells") {
  ingest::TrafficAggregate t;
  t.intensities = {{1, 10}, {2, 20}, {3, 30}, {9, 5}};
  const std::vector<ingest::GridCell> grid = {square(1, 0), square(2, 1), square(3, 2), square(4, 3)};
  const auto map = heatmap_geojson(grid, t, std::vector<CellId>{3});
  CHECK(map.cells_without_geometry == 1);
  CHECK(map.cells_without_activity == 1);
  const auto doc = json::parse(map.geojson);
  REQUIRE(doc["features"].size() == 3);
  const std::vector<double> norms = {0.0, 0.5, 1.0};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& props = doc["features"][i]["properties"];
    CHECK(props["intensity_norm"].get<double>() == norms[i]);
    CHECK(props["is_hotspot"].get<bool>() == (i == 2));
  }
  // The output is itself a readable grid.
  CHECK(ingest::parse_grid_text(map.geojson).size() == 3);
}

TEST_CASE("heatmap of a flat field is zero everywhere, without hotspot flags") {
  ingest::TrafficAggregate t;
  t.intensities = {{1, 4}, {2, 4}};
  const auto doc = json::parse(heatmap_geojson(std::vector{square(1, 0), square(2, 1)}, t, std::nullopt).geojson);
  for (const auto& f : doc["features"]) {
    CHECK(f["properties"]["intensity_norm"].get<double>() == 0.0);
    CHECK_FALSE(f["properties"].contains("is_hotspot"));
  }
  CHECK(doc["properties"]["normalization"].get<std::string>().find("max == min") != std::string::npos);
}

TEST_CASE("hotspots and centrality CSVs round-trip") {
  TempDir dir;
  HotspotSet set;
  set.members = {4, 9};
  set.intensities = {{4, 0.1}, {9, 1.0 / 3}};
  io::write_file_atomic(dir / "h.csv", hotspots_csv(set));
  CHECK(read_hotspots_csv(dir / "h.csv") == set.intensities);

  CentralityScores s;
  s.metric = Metric::pagerank;
  s.scores = {{4, 0.3}, {9, 0.7}};
  std::vector<MetricOutcome> outcomes = {{Metric::pagerank, s, std::nullopt, {}},
                                         {Metric::betweenness, std::nullopt, ErrorKind::domain, "too small"}};
  io::write_file_atomic(dir / "c.csv", centrality_csv(outcomes));
  const auto back = read_centrality_csv(dir / "c.csv");
  REQUIRE(back.size() == 1);
  CHECK(back.at(Metric::pagerank).scores == s.scores);

  CHECK(rankings_csv(outcomes) == "metric,rank,cell_id,score\npagerank,1,9,0.7\npagerank,2,4,0.3\n");
  const auto j = centrality_json(outcomes, {});
  CHECK(j["metrics"]["betweenness"]["status"] == "failed");
  CHECK(j["metrics"]["pagerank"]["status"] == "ok");
  CHECK(j["params"]["damping"] == 0.85);
}

TEST_CASE("malformed report files are parse errors") {
  TempDir dir;
  io::write_file_atomic(dir / "bad.csv", "cell,intensity\n1,2\n");
  CHECK_THROWS_AS(read_hotspots_csv(dir / "bad.csv"), ParseError);
  io::write_file_atomic(dir / "bad2.csv", "cell_id,metric,score\n1,fame,2\n");
  CHECK_THROWS_AS(read_centrality_csv(dir / "bad2.csv"), ParseError);
}

TEST_CASE("manifest records digests of inputs and outputs") {
  TempDir dir;
  io::write_file_atomic(dir / "in.txt", "abc");
  io::write_file_atomic(dir / "out.txt", "abc");
  Manifest m("demo");
  m.input("source", dir / "in.txt");
  m.config("p", 0.75);
  m.output(dir / "out.txt");
  m.write(dir.path());
  const auto j = json::parse(io::read_file(dir / "manifest.json"));
  CHECK(j["command"] == "demo");
  CHECK(j["inputs"][0]["sha256"] == io::sha256_hex("abc"));
  CHECK(j["outputs"][0]["path"] == "out.txt");
  CHECK(j["config"]["p"] == 0.75);
  CHECK(j["version"] == kToolVersion);
}
