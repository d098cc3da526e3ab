#pragma once

#include <vector>

namespace hotspot {

// Accumulates doubles without rounding error (Shewchuk's non-overlapping
// partials) and rounds once, correctly, on value(). The result therefore does
// not depend on the order in which terms were added or on how accumulators
// were split and merged, which is what makes traffic aggregation
// permutation-invariant and safe to parallelize bit-identically.
//
// Inputs must be finite.
class ExactSum {
 public:
  void add(double x);
  void merge(const ExactSum& other);
  double value() const;

  bool empty() const noexcept { return partials_.empty(); }

 private:
  // Increasing magnitude, non-overlapping.
  std::vector<double> partials_;
};

}  // namespace hotspot
