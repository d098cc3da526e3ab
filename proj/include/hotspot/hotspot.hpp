#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "hotspot/ingest.hpp"

namespace hotspot {

// Cutoff of the hotspot inequality
//
//   I_i >= mean + delta,   delta = (max - mean) * p
//
// computed over every cell present in a TrafficAggregate.
struct ThresholdSpec {
  double p = 0.0;
  double mean_intensity = 0.0;
  double max_traffic = 0.0;
  double delta = 0.0;
  double threshold = 0.0;
  std::size_t n_areas = 0;
};

struct HotspotSet {
  TimeWindow window = TimeWindow::unbounded();
  ThresholdSpec spec;
  std::vector<CellId> members;  // ascending
  std::map<CellId, double> intensities;
  // Set by calibrate_p when ties at the threshold forced a top-k cut.
  bool truncated = false;
};

// Throws DomainError for an empty aggregate or p outside [0, 1].
ThresholdSpec compute_threshold(const ingest::TrafficAggregate& traffic, double p);

HotspotSet detect_hotspots(const ingest::TrafficAggregate& traffic, double p);

struct Calibration {
  double p = 0.0;
  HotspotSet hotspots;
};

// Scans p over {0, 0.001, ..., 1} and keeps the largest value whose hotspot
// count is still >= k. If that count exceeds k (ties at the threshold), the
// set is cut to the k most intense cells (ties by ascending id) and flagged
// as truncated. Throws CalibrationError when fewer than k cells can ever
// qualify.
Calibration calibrate_p(const ingest::TrafficAggregate& traffic, std::size_t k);

inline constexpr int kCalibrationSteps = 1000;

}  // namespace hotspot
