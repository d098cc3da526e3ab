#include <doctest.h>
#include <zlib.h>

#include <algorithm>
#include <random>

#include "hotspot/error.hpp"
#include "hotspot/exact_sum.hpp"
#include "hotspot/ingest.hpp"
#include "hotspot/io.hpp"
#include "temp_dir.hpp"

using namespace hotspot;
using namespace hotspot::ingest;

namespace {

std::filesystem::path write(const TempDir& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  io::write_file_atomic(p, text);
  return p;
}

std::vector<ActivityRecord> random_activity(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<CellId> cell(1, 12);
  std::uniform_int_distribution<EpochMillis> ts(0, 999);
  std::uniform_real_distribution<double> q(0.0, 50.0);
  std::bernoulli_distribution zero(0.2);
  std::vector<ActivityRecord> out(n);
  for (auto& r : out) {
    r.cell_id = cell(rng);
    r.timestamp = ts(rng);
    r.country_code = 39;
    for (double* f : {&r.sms_in, &r.sms_out, &r.call_in, &r.call_out, &r.internet}) {
      *f = zero(rng) ? 0.0 : q(rng);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("activity line with an empty field reads it as zero") {
  const auto r = parse_activity_line("1\t1383260400000\t39\t0.1\t0.2\t\t0.3\t1.5", {}, 1);
  CHECK(r.cell_id == 1);
  CHECK(r.timestamp == 1383260400000);
  CHECK(r.country_code == 39);
  CHECK(r.sms_in == 0.1);
  CHECK(r.sms_out == 0.2);
  CHECK(r.call_in == 0.0);
  CHECK(r.call_out == 0.3);
  CHECK(r.internet == 1.5);
}

TEST_CASE("trailing absent columns read as zero") {
  const auto r = parse_activity_line("7\t100\t39\t2.5", {}, 1);
  CHECK(r.sms_in == 2.5);
  CHECK(r.internet == 0.0);
}

TEST_CASE("bad cell id names the line") {
  try {
    parse_activity_line("abc\t1383260400000\t39\t1", {}, 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_activity_line("0\t1\t39\t1", {}, 4), ParseError);
  CHECK_THROWS_AS(parse_activity_line("3\tnoon\t39\t1", {}, 4), ParseError);
  CHECK_THROWS_AS(parse_activity_line("3\t1\t39\t-0.5", {}, 4), ParseError);
}

TEST_CASE("interaction lines") {
  const auto r = parse_interaction_line("5\t7\t1383260400000\t2.5", {}, 1);
  CHECK(r == InteractionRecord{5, 7, 1383260400000, 2.5});
  CHECK_THROWS_AS(parse_interaction_line("5\t7\t1383260400000\t-1.0", {}, 2), ParseError);
  CHECK_THROWS_AS(parse_interaction_line("5\t7\t1383260400000\tnan", {}, 2), ParseError);
}

TEST_CASE("empty files yield empty streams") {
  TempDir dir;
  const auto a = write(dir, "a.tsv", "");
  const auto i = write(dir, "i.tsv", "");
  CHECK(parse_activity(a).empty());
  CHECK(parse_interactions(i).empty());
}

TEST_CASE("missing file is an io error naming the path") {
  try {
    parse_activity("/nonexistent/activity.tsv");
    FAIL("expected an io error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/activity.tsv") != std::string::npos);
  }
}

TEST_CASE("malformed policy: abort by default, skip and count when asked") {
  TempDir dir;
  const auto p = write(dir, "a.tsv", "1\t10\t39\t1\nxx\t10\t39\t1\n2\t10\t39\t2\r\n\n");
  try {
    parse_activity(p);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  IngestOptions lenient;
  lenient.policy = MalformedPolicy::skip;
  ParseStats stats;
  const auto records = parse_activity(p, lenient, &stats);
  REQUIRE(records.size() == 2);
  CHECK(records[1].sms_in == 2.0);
  CHECK(stats.skipped == 1);
  CHECK(stats.records == 2);
}

TEST_CASE("gzip input is detected by magic bytes") {
  TempDir dir;
  const std::string text = "5\t7\t100\t1.0\n5\t7\t200\t2.0\n";
  const auto p = dir / "i.tsv.whatever";
  gzFile gz = gzopen(p.c_str(), "wb");
  REQUIRE(gz);
  gzwrite(gz, text.data(), static_cast<unsigned>(text.size()));
  gzclose(gz);
  const auto records = parse_interactions(p);
  REQUIRE(records.size() == 2);
  CHECK(records[1] == InteractionRecord{5, 7, 200, 2.0});
}

TEST_CASE("ingest config selects layout, delimiter and policy") {
  const auto opts = parse_ingest_options(
      "# time-first interaction layout\n"
      "delimiter = comma\n"
      "malformed = skip\n"
      "interactions.timestamp = 0\n"
      "interactions.src_id = 1\n"
      "interactions.dst_id = 2\n"
      "interactions.strength = 3\n");
  CHECK(opts.layout.delimiter == ',');
  CHECK(opts.policy == MalformedPolicy::skip);
  const auto r = parse_interaction_line("100,5,7,2.5", opts.layout, 1);
  CHECK(r == InteractionRecord{5, 7, 100, 2.5});
  CHECK_THROWS_AS(parse_ingest_options("colour = blue\n"), ParseError);
  CHECK_THROWS_AS(parse_ingest_options("activity.sms_in = x\n"), ParseError);
}

TEST_CASE("grid parsing") {
  const std::string one =
      R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{"cellId":42},)"
      R"("geometry":{"type":"Polygon","coordinates":[[[9.0,45.0],[9.1,45.0],[9.1,45.1],[9.0,45.1],[9.0,45.0]]]}}]})";
  const auto cells = parse_grid_text(one);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].cell_id == 42);
  CHECK(cells[0].polygon.size() == 5);
  CHECK(cells[0].polygon.front() == cells[0].polygon.back());

  const std::string dup =
      R"({"type":"FeatureCollection","features":[)"
      R"({"type":"Feature","properties":{"cellId":7},"geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]}},)"
      R"({"type":"Feature","properties":{"cellId":7},"geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]}}]})";
  CHECK_THROWS_AS(parse_grid_text(dup), DomainError);

  const std::string point =
      R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{"cellId":1},)"
      R"("geometry":{"type":"Point","coordinates":[9.0,45.0]}}]})";
  CHECK_THROWS_AS(parse_grid_text(point), UnsupportedGeometryError);

  CHECK_THROWS_AS(parse_grid_text("{not json"), ParseError);
  const std::string open_ring =
      R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{"cellId":1},)"
      R"("geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1]]]}}]})";
  CHECK_THROWS(parse_grid_text(open_ring));
}

TEST_CASE("grid round-trips through its writer") {
  std::vector<GridCell> cells = {
      {3, {{9.0, 45.0}, {9.0025, 45.0}, {9.0025, 45.0025}, {9.0, 45.0025}, {9.0, 45.0}}},
      {4, {{9.1, 45.0}, {9.2, 45.0}, {9.2, 45.1}, {9.1, 45.0}}}};
  const auto back = parse_grid_text(format_grid(cells));
  REQUIRE(back.size() == 2);
  CHECK(back[0].cell_id == 3);
  CHECK(back[0].polygon == cells[0].polygon);
  CHECK(back[1].polygon == cells[1].polygon);
}

TEST_CASE("traffic aggregation sums the five fields per cell") {
  std::vector<ActivityRecord> records(3);
  records[0] = {3, 10, 39, 0.5, 0.5, 0.5, 0.5, 0.0};  // 2.0
  records[1] = {3, 20, 39, 1.0, 0.0, 0.0, 0.5, 2.0};  // 3.5
  records[2] = {4, 30, 39, 9.0, 0.0, 0.0, 0.0, 0.0};  // at the window end
  const auto agg = aggregate_traffic(records, TimeWindow(0, 30));
  CHECK(agg.intensities.size() == 1);
  CHECK(agg.intensities.at(3) == 5.5);
  CHECK(aggregate_traffic({}, TimeWindow(0, 30)).intensities.empty());
}

TEST_CASE("interaction aggregation keeps direction and drops empty windows") {
  const std::vector<InteractionRecord> records = {
      {5, 7, 1, 1.0}, {5, 7, 2, 2.0}, {7, 5, 3, 4.0}, {7, 5, 50, 8.0}};
  const auto agg = aggregate_interactions(records, TimeWindow(0, 10));
  CHECK(agg.strengths.size() == 2);
  CHECK(agg.strengths.at({5, 7}) == 3.0);
  CHECK(agg.strengths.at({7, 5}) == 4.0);
  CHECK(aggregate_interactions(records, TimeWindow(100, 200)).strengths.empty());

  const std::vector<InteractionRecord> zeros = {{1, 2, 1, 0.0}, {1, 2, 2, 0.0}};
  CHECK(aggregate_interactions(zeros, TimeWindow(0, 10)).strengths.empty());
}

TEST_CASE("property: aggregation is permutation invariant, bit for bit") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto records = random_activity(rng, 400);
    const TimeWindow w(100, 900);
    const auto base = aggregate_traffic(records, w);
    std::shuffle(records.begin(), records.end(), rng);
    CHECK(aggregate_traffic(records, w).intensities == base.intensities);
    CHECK(aggregate_traffic(records, w, 4).intensities == base.intensities);
  }
}

TEST_CASE("property: additivity and window partition") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto records = random_activity(rng, 300);
    const std::size_t cut = std::uniform_int_distribution<std::size_t>(0, records.size())(rng);
    const TimeWindow w(0, 1000);

    TrafficAccumulator left(w), right(w), whole(w);
    for (std::size_t i = 0; i < records.size(); ++i) {
      (i < cut ? left : right).add(records[i]);
      whole.add(records[i]);
    }
    left.merge(right);
    CHECK(left.finish().intensities == whole.finish().intensities);

    const EpochMillis mid = std::uniform_int_distribution<EpochMillis>(1, 999)(rng);
    const auto a = aggregate_traffic(records, TimeWindow(0, mid));
    const auto b = aggregate_traffic(records, TimeWindow(mid, 1000));
    const auto all = aggregate_traffic(records, w);
    for (const auto& [cell, total] : all.intensities) {
      // Both halves are correctly rounded sums, so their sum is within one
      // rounding of the exact total.
      const double parts = (a.intensities.count(cell) ? a.intensities.at(cell) : 0.0) +
                           (b.intensities.count(cell) ? b.intensities.at(cell) : 0.0);
      CHECK(parts == doctest::Approx(total).epsilon(1e-15));
    }
  }
}

TEST_CASE("property: records round-trip through text") {
  std::mt19937_64 rng(13);
  const ColumnLayout layout;
  for (const auto& r : random_activity(rng, 500)) {
    CHECK(parse_activity_line(format_activity_line(r, layout), layout, 1) == r);
  }
  std::uniform_real_distribution<double> s(0.0, 1e6);
  for (int i = 0; i < 500; ++i) {
    const InteractionRecord r{static_cast<CellId>(i + 1), static_cast<CellId>(i + 2), i * 1000LL, s(rng)};
    CHECK(parse_interaction_line(format_interaction_line(r, layout), layout, 1) == r);
  }
}

TEST_CASE("streaming file aggregation matches in-memory aggregation") {
  TempDir dir;
  std::mt19937_64 rng(14);
  const auto records = random_activity(rng, 1000);
  std::string text;
  for (const auto& r : records) text += format_activity_line(r, {}) + "\n";
  const auto p = write(dir, "a.tsv", text);
  const TimeWindow w(200, 800);
  CHECK(aggregate_traffic_file(p, w).intensities == aggregate_traffic(records, w).intensities);
}

TEST_CASE("exact sum is correctly rounded and order independent") {
  ExactSum s;
  for (double x : {1e100, 1.0, -1e100, 1e-3}) s.add(x);
  CHECK(s.value() == 1.001);
  ExactSum t;
  for (int i = 0; i < 10; ++i) t.add(0.1);
  CHECK(t.value() == 1.0);
}

TEST_CASE("timestamps") {
  CHECK(parse_timestamp("1384732800000") == 1384732800000);
  CHECK(parse_timestamp("2013-11-18") == 1384732800000);
  CHECK(parse_timestamp("2013-11-18T01:00:00Z") == 1384736400000);
  CHECK_THROWS(parse_timestamp("yesterday"));
  CHECK_THROWS_AS(TimeWindow(5, 5), DomainError);
}
