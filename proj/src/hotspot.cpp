#include "hotspot/hotspot.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hotspot/error.hpp"
#include "hotspot/exact_sum.hpp"

namespace hotspot {

namespace {

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("threshold parameter p must lie in [0, 1], got " + std::to_string(p));
  }
}

struct Stats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

Stats intensity_stats(const ingest::TrafficAggregate& traffic) {
  if (traffic.intensities.empty()) {
    throw DomainError("traffic aggregate is empty; no cells to rank");
  }
  ExactSum total;
  Stats s;
  s.min = traffic.intensities.begin()->second;
  s.max = s.min;
  for (const auto& [cell, value] : traffic.intensities) {
    total.add(value);
    s.min = std::min(s.min, value);
    s.max = std::max(s.max, value);
  }
  s.n = traffic.intensities.size();
  // The rounded mean of a constant field must be that constant.
  s.mean = std::clamp(total.value() / static_cast<double>(s.n), s.min, s.max);
  return s;
}

ThresholdSpec threshold_from(const Stats& s, double p) {
  ThresholdSpec spec;
  spec.p = p;
  spec.mean_intensity = s.mean;
  spec.max_traffic = s.max;
  spec.n_areas = s.n;
  spec.delta = (s.max - s.mean) * p;
  // mean + delta can round one ulp past max when p == 1; the cutoff never
  // exceeds the largest intensity.
  spec.threshold = std::min(s.mean + spec.delta, s.max);
  return spec;
}

HotspotSet select(const ingest::TrafficAggregate& traffic, const ThresholdSpec& spec) {
  HotspotSet set;
  set.window = traffic.window;
  set.spec = spec;
  for (const auto& [cell, value] : traffic.intensities) {
    if (value >= spec.threshold) {
      set.members.push_back(cell);
      set.intensities.emplace(cell, value);
    }
  }
  return set;
}

}  // namespace

ThresholdSpec compute_threshold(const ingest::TrafficAggregate& traffic, double p) {
  check_p(p);
  return threshold_from(intensity_stats(traffic), p);
}

HotspotSet detect_hotspots(const ingest::TrafficAggregate& traffic, double p) {
  return select(traffic, compute_threshold(traffic, p));
}

Calibration calibrate_p(const ingest::TrafficAggregate& traffic, std::size_t k) {
  if (k == 0) throw DomainError("target hotspot count k must be at least 1");
  const Stats stats = intensity_stats(traffic);

  std::vector<double> sorted;
  sorted.reserve(traffic.intensities.size());
  for (const auto& [cell, value] : traffic.intensities) sorted.push_back(value);
  std::sort(sorted.begin(), sorted.end());
  const auto count_at = [&](double threshold) {
    return static_cast<std::size_t>(sorted.end() -
                                    std::lower_bound(sorted.begin(), sorted.end(), threshold));
  };

  // The count is non-increasing in p, so the widest set is the one at p = 0.
  const std::size_t reachable = count_at(threshold_from(stats, 0.0).threshold);
  if (reachable < k) {
    throw CalibrationError("cannot calibrate p for " + std::to_string(k) +
                               " hotspots: at most " + std::to_string(reachable) +
                               " cells reach the mean intensity",
                           reachable);
  }

  int step = kCalibrationSteps;
  for (; step > 0; --step) {
    const double p = static_cast<double>(step) / kCalibrationSteps;
    if (count_at(threshold_from(stats, p).threshold) >= k) break;
  }
  const double p = static_cast<double>(step) / kCalibrationSteps;

  Calibration result;
  result.p = p;
  result.hotspots = select(traffic, threshold_from(stats, p));
  if (result.hotspots.members.size() > k) {
    std::vector<std::pair<CellId, double>> ranked(result.hotspots.intensities.begin(),
                                                  result.hotspots.intensities.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    ranked.resize(k);
    std::sort(ranked.begin(), ranked.end());
    result.hotspots.members.clear();
    result.hotspots.intensities.clear();
    for (const auto& [cell, value] : ranked) {
      result.hotspots.members.push_back(cell);
      result.hotspots.intensities.emplace(cell, value);
    }
    result.hotspots.truncated = true;
  }
  return result;
}

}  // namespace hotspot
