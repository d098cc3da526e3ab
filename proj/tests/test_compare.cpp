#include <doctest.h>

#include <cmath>
#include <random>

#include "hotspot/compare.hpp"
#include "hotspot/error.hpp"

using namespace hotspot;

namespace {

MetricSeries series(std::vector<double> values) {
  MetricSeries s;
  for (std::size_t i = 0; i < values.size(); ++i) s.ordering.push_back(i + 1);
  s.values = std::move(values);
  return s;
}

CentralityScores scores(Metric metric, std::map<CellId, double> values) {
  CentralityScores s;
  s.metric = metric;
  s.scores = std::move(values);
  return s;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> v(0.0, 10.0);
  std::vector<double> out(n);
  for (double& x : out) x = v(rng);
  return out;
}

}  // namespace

TEST_CASE("to_series aligns to ascending ids") {
  const auto s = to_series(scores(Metric::degree, {{5, 0.2}, {3, 0.7}}), std::vector<CellId>{5, 3});
  CHECK(s.ordering == std::vector<CellId>{3, 5});
  CHECK(s.values == std::vector<double>{0.7, 0.2});
  try {
    to_series(scores(Metric::degree, {{5, 0.2}}), std::vector<CellId>{5, 9});
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("9") != std::string::npos);
  }
  CHECK(to_series(scores(Metric::degree, {{5, 0.2}}), std::vector<CellId>{}).values.empty());
}

TEST_CASE("cross-correlation by direct evaluation") {
  const auto f = series({1, 2, 3});
  const auto c = cross_correlation(f, f);
  CHECK(c.shifts == std::vector<int>{-2, -1, 0, 1, 2});
  CHECK(c.at(0) == 14.0);
  CHECK(c.at(1) == 8.0);
  CHECK(c.at(2) == 3.0);

  const auto a = series({1, 0});
  const auto b = series({0, 1});
  const auto ab = cross_correlation(a, b);
  CHECK(ab.at(1) == 1.0);
  CHECK(ab.at(0) == 0.0);
  CHECK(ab.at(-1) == 0.0);

  const auto one = cross_correlation(series({3}), series({-2.5}));
  CHECK(one.shifts == std::vector<int>{0});
  CHECK(one.at(0) == -7.5);
  CHECK_THROWS_AS(one.at(1), DomainError);
}

TEST_CASE("cross-correlation rejects different node sets") {
  auto f = series({1, 2, 3});
  auto g = series({1, 2, 3});
  g.ordering = {1, 2, 4};
  try {
    cross_correlation(f, g);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("3, 4") != std::string::npos);
  }
}

TEST_CASE("autocorrelation") {
  const auto a = autocorrelation(series({1, 2, 3}));
  CHECK(a.at(0) == 14.0);
  for (int n = 1; n <= 2; ++n) CHECK(a.at(n) == a.at(-n));
  for (double v : autocorrelation(series({0, 0, 0, 0})).values) CHECK(v == 0.0);
}

TEST_CASE("auto-cross difference") {
  CorrelationSeries a{{0}, {14.0}};
  CorrelationSeries c{{0}, {13.3}};
  const auto d = auto_cross_diff_pct(a, c);
  CHECK(d.percent[0] == doctest::Approx(5.0).epsilon(1e-12));

  const auto same = auto_cross_diff_pct(a, a);
  CHECK(same.percent == std::vector<double>{0.0});

  CorrelationSeries z{{-1, 0, 1}, {0.0, 2.0, 0.0}};
  CorrelationSeries zc{{-1, 0, 1}, {1.0, 2.0, 1.0}};
  const auto omitted = auto_cross_diff_pct(z, zc);
  CHECK(omitted.has_omitted());
  CHECK(omitted.omitted == std::vector<int>{-1, 1});
  CHECK(omitted.shifts == std::vector<int>{0});

  CorrelationSeries other{{-1, 0}, {1.0, 1.0}};
  CHECK_THROWS_AS(auto_cross_diff_pct(z, other), DomainError);
}

TEST_CASE("per-node relative difference") {
  const auto d = per_node_rel_diff(series({0.5}), series({0.55}));
  CHECK(d.at(1) == doctest::Approx(10.0).epsilon(1e-12));
  for (const auto& [id, v] : per_node_rel_diff(series({1, 2}), series({1, 2}))) CHECK(v == 0.0);
  try {
    per_node_rel_diff(series({1, 0, 2}), series({1, 1, 2}));
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("node 2") != std::string::npos);
  }
}

TEST_CASE("dispersion") {
  const auto flat = dispersion(std::vector<double>{2, 2, 2});
  CHECK(flat.variance == 0.0);
  CHECK(*flat.cv == 0.0);
  const auto two = dispersion(std::vector<double>{0, 2});
  CHECK(two.variance == 1.0);
  CHECK(*two.cv == 1.0);
  CHECK(dispersion(std::vector<double>{7}).variance == 0.0);
  CHECK_FALSE(dispersion(std::vector<double>{0, 0}).cv.has_value());
  CHECK_THROWS_AS(dispersion(std::vector<double>{}), DomainError);

  ingest::TrafficAggregate t;
  t.intensities = {{1, 0.0}, {2, 2.0}};
  CHECK(dispersion(t).variance == 1.0);
}

TEST_CASE("compare_weeks: identity and uniform growth") {
  const auto w1 = scores(Metric::closeness, {{3, 0.2}, {5, 0.4}, {8, 0.9}});
  const auto same = compare_weeks(w1, w1);
  for (const auto& [id, v] : same.per_node_rel_diff_pct) CHECK(v == 0.0);
  for (double v : same.auto_cross_diff.percent) CHECK(v == 0.0);

  auto w2 = w1;
  for (auto& [id, v] : w2.scores) v *= 1.05;
  const auto grown = compare_weeks(w1, w2);
  for (const auto& [id, v] : grown.per_node_rel_diff_pct) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));
  for (double v : grown.auto_cross_diff.percent) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("compare_weeks: mismatched sets and zero baselines") {
  const auto w1 = scores(Metric::betweenness, {{3, 0.0}, {5, 1.0}, {8, 2.0}});
  auto w2 = scores(Metric::betweenness, {{3, 0.0}, {5, 1.0}, {9, 2.0}});
  try {
    compare_weeks(w1, w2);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("8, 9") != std::string::npos);
  }
  const auto r = compare_weeks(w1, w1);
  CHECK(r.zero_baseline == std::vector<CellId>{3});
  CHECK(r.per_node_rel_diff_pct.size() == 2);
  CHECK_THROWS_AS(compare_weeks(w1, scores(Metric::degree, w1.scores)), DomainError);
}

TEST_CASE("property: correlation identities on random series") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 25)(rng);
    const auto f = series(random_values(rng, len));
    const auto g = series(random_values(rng, len));
    const auto auto_f = autocorrelation(f);
    CHECK(cross_correlation(f, f).values == auto_f.values);
    for (int n = 0; n < static_cast<int>(len); ++n) CHECK(auto_f.at(n) == auto_f.at(-n));
    for (double v : auto_f.values) CHECK(v <= auto_f.at(0) * (1 + 1e-12));

    const auto cross = cross_correlation(f, g);
    const double bound = auto_f.at(0) * autocorrelation(g).at(0);
    CHECK(cross.at(0) * cross.at(0) <= bound * (1 + 1e-12));

    auto scaled = g;
    for (double& v : scaled.values) v *= 2.5;
    const auto cross_scaled = cross_correlation(f, scaled);
    for (std::size_t i = 0; i < cross.values.size(); ++i) {
      CHECK(cross_scaled.values[i] == doctest::Approx(2.5 * cross.values[i]).epsilon(1e-12));
    }

    for (const auto& [id, v] : per_node_rel_diff(f, f)) CHECK(v == 0.0);
    for (double v : auto_cross_diff_pct(auto_f, cross_correlation(f, f)).percent) CHECK(v == 0.0);
  }
}
