#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hotspot/centrality.hpp"
#include "hotspot/ingest.hpp"

namespace hotspot {

// One metric's values for a fixed, ascending node ordering.
struct MetricSeries {
  Metric metric = Metric::degree;
  std::vector<CellId> ordering;
  std::vector<double> values;
};

// Raw discrete correlation, shifts -(L-1) .. L-1 in ascending order.
struct CorrelationSeries {
  std::vector<int> shifts;
  std::vector<double> values;

  // Throws DomainError for a shift outside the range.
  double at(int shift) const;
};

// |auto(tau) - cross(tau)| / auto(tau) * 100 on every shift where auto is
// nonzero; shifts with auto == 0 are listed in `omitted`.
struct CorrelationDiff {
  std::vector<int> shifts;
  std::vector<double> percent;
  std::vector<int> omitted;

  bool has_omitted() const noexcept { return !omitted.empty(); }
};

struct Dispersion {
  double mean = 0.0;
  double variance = 0.0;  // population variance
  std::optional<double> cv;  // stddev / mean; empty when mean <= 0
};

// Values of `scores` aligned to `node_set` in ascending id order. Throws
// DomainError naming the first id missing from the scores.
MetricSeries to_series(const CentralityScores& scores, std::span<const CellId> node_set);

// values[n] = sum_m f[m] * g[m + n], zero-padded outside [0, L).
CorrelationSeries cross_correlation(const MetricSeries& f, const MetricSeries& g);
CorrelationSeries autocorrelation(const MetricSeries& f);

CorrelationDiff auto_cross_diff_pct(const CorrelationSeries& autocorr,
                                    const CorrelationSeries& cross);

// |v2 - v1| / v1 * 100 per node. Throws DomainError on a zero baseline.
std::map<CellId, double> per_node_rel_diff(const MetricSeries& week1, const MetricSeries& week2);

Dispersion dispersion(std::span<const double> values);
Dispersion dispersion(const ingest::TrafficAggregate& traffic);

// Week-over-week comparison of one metric over the week-1 node set.
struct ComparisonReport {
  Metric metric = Metric::degree;
  MetricSeries week1;
  MetricSeries week2;
  // Nodes whose week-1 value is zero have no relative difference; they are
  // listed in zero_baseline instead.
  std::map<CellId, double> per_node_rel_diff_pct;
  std::vector<CellId> zero_baseline;
  CorrelationSeries autocorr;
  CorrelationSeries cross;
  CorrelationDiff auto_cross_diff;
  Dispersion dispersion_week1;
  Dispersion dispersion_week2;
};

// Throws DomainError listing the symmetric difference when the two score
// maps cover different node sets.
ComparisonReport compare_weeks(const CentralityScores& week1, const CentralityScores& week2);

}  // namespace hotspot
