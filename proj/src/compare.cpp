#include "hotspot/compare.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "hotspot/exact_sum.hpp"
#include "hotspot/kernels.hpp"

namespace hotspot {

namespace {

std::string id_list(const std::vector<CellId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(ids[i]);
  }
  return out;
}

void require_same_ordering(const MetricSeries& f, const MetricSeries& g) {
  if (f.ordering == g.ordering) return;
  std::vector<CellId> a = f.ordering;
  std::vector<CellId> b = g.ordering;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<CellId> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  throw DomainError("series cover different hotspot sets; differing ids: " +
                    (diff.empty() ? std::string("(same ids, different order)") : id_list(diff)));
}

double rel_diff_pct(double v1, double v2) { return std::fabs(v2 - v1) / std::fabs(v1) * 100.0; }

}  // namespace

double CorrelationSeries::at(int shift) const {
  if (shifts.empty() || shift < shifts.front() || shift > shifts.back()) {
    throw DomainError("shift " + std::to_string(shift) + " outside correlation range");
  }
  return values[static_cast<std::size_t>(shift - shifts.front())];
}

MetricSeries to_series(const CentralityScores& scores, std::span<const CellId> node_set) {
  MetricSeries series;
  series.metric = scores.metric;
  series.ordering.assign(node_set.begin(), node_set.end());
  std::sort(series.ordering.begin(), series.ordering.end());
  series.ordering.erase(std::unique(series.ordering.begin(), series.ordering.end()),
                        series.ordering.end());
  series.values.reserve(series.ordering.size());
  for (CellId id : series.ordering) {
    const auto it = scores.scores.find(id);
    if (it == scores.scores.end()) {
      throw DomainError("node " + std::to_string(id) + " has no " +
                        std::string(to_string(scores.metric)) + " score");
    }
    series.values.push_back(it->second);
  }
  return series;
}

CorrelationSeries cross_correlation(const MetricSeries& f, const MetricSeries& g) {
  require_same_ordering(f, g);
  const auto len = static_cast<int>(f.values.size());
  if (len == 0) throw DomainError("correlation needs series of length >= 1");
  const std::span<const double> fv(f.values);
  const std::span<const double> gv(g.values);

  CorrelationSeries out;
  out.shifts.reserve(static_cast<std::size_t>(2 * len - 1));
  out.values.reserve(static_cast<std::size_t>(2 * len - 1));
  for (int n = -(len - 1); n <= len - 1; ++n) {
    // Overlap of f[m] and g[m + n] inside [0, len).
    const int m0 = std::max(0, -n);
    const int m1 = std::min(len, len - n);
    const auto count = static_cast<std::size_t>(m1 - m0);
    out.shifts.push_back(n);
    out.values.push_back(kernels::dot(fv.subspan(static_cast<std::size_t>(m0), count),
                                      gv.subspan(static_cast<std::size_t>(m0 + n), count)));
  }
  return out;
}

CorrelationSeries autocorrelation(const MetricSeries& f) { return cross_correlation(f, f); }

CorrelationDiff auto_cross_diff_pct(const CorrelationSeries& autocorr,
                                    const CorrelationSeries& cross) {
  if (autocorr.shifts != cross.shifts) {
    throw DomainError("autocorrelation and cross-correlation cover different shift ranges");
  }
  CorrelationDiff out;
  for (std::size_t i = 0; i < autocorr.shifts.size(); ++i) {
    const double a = autocorr.values[i];
    if (a == 0.0) {
      out.omitted.push_back(autocorr.shifts[i]);
      continue;
    }
    out.shifts.push_back(autocorr.shifts[i]);
    out.percent.push_back(std::fabs(a - cross.values[i]) / a * 100.0);
  }
  return out;
}

std::map<CellId, double> per_node_rel_diff(const MetricSeries& week1, const MetricSeries& week2) {
  require_same_ordering(week1, week2);
  std::map<CellId, double> out;
  for (std::size_t i = 0; i < week1.ordering.size(); ++i) {
    const double v1 = week1.values[i];
    if (v1 == 0.0) {
      throw DomainError("node " + std::to_string(week1.ordering[i]) +
                        " has a zero week-1 value; relative difference undefined");
    }
    out.emplace(week1.ordering[i], rel_diff_pct(v1, week2.values[i]));
  }
  return out;
}

Dispersion dispersion(std::span<const double> values) {
  if (values.empty()) throw DomainError("dispersion of an empty set");
  const auto n = static_cast<double>(values.size());
  ExactSum total;
  for (double v : values) total.add(v);
  Dispersion out;
  out.mean = total.value() / n;
  ExactSum squares;
  for (double v : values) squares.add((v - out.mean) * (v - out.mean));
  out.variance = squares.value() / n;
  if (out.mean > 0.0) out.cv = std::sqrt(out.variance) / out.mean;
  return out;
}

Dispersion dispersion(const ingest::TrafficAggregate& traffic) {
  std::vector<double> values;
  values.reserve(traffic.intensities.size());
  for (const auto& [cell, v] : traffic.intensities) values.push_back(v);
  return dispersion(values);
}

ComparisonReport compare_weeks(const CentralityScores& week1, const CentralityScores& week2) {
  if (week1.metric != week2.metric) throw DomainError("cannot compare different metrics");

  std::vector<CellId> nodes1, nodes2;
  for (const auto& [id, v] : week1.scores) nodes1.push_back(id);
  for (const auto& [id, v] : week2.scores) nodes2.push_back(id);
  if (nodes1 != nodes2) {
    std::vector<CellId> diff;
    std::set_symmetric_difference(nodes1.begin(), nodes1.end(), nodes2.begin(), nodes2.end(),
                                  std::back_inserter(diff));
    throw DomainError(std::string(to_string(week1.metric)) +
                      ": weeks cover different hotspot sets; differing ids: " + id_list(diff));
  }

  ComparisonReport report;
  report.metric = week1.metric;
  report.week1 = to_series(week1, nodes1);
  report.week2 = to_series(week2, nodes1);
  for (std::size_t i = 0; i < nodes1.size(); ++i) {
    const double v1 = report.week1.values[i];
    if (v1 == 0.0) {
      report.zero_baseline.push_back(nodes1[i]);
    } else {
      report.per_node_rel_diff_pct.emplace(nodes1[i], rel_diff_pct(v1, report.week2.values[i]));
    }
  }
  report.autocorr = autocorrelation(report.week1);
  report.cross = cross_correlation(report.week1, report.week2);
  report.auto_cross_diff = auto_cross_diff_pct(report.autocorr, report.cross);
  report.dispersion_week1 = dispersion(report.week1.values);
  report.dispersion_week2 = dispersion(report.week2.values);
  return report;
}

}  // namespace hotspot
