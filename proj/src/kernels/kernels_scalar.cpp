#include <cmath>

#include "hotspot/kernels.hpp"

namespace hotspot::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

void matvec_scalar(const double* m, const double* x, double* y, std::size_t rows, std::size_t n) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(m + r * n, x, n);
}

constexpr KernelTable kScalar{Isa::scalar, dot_scalar, sum_abs_diff_scalar, matvec_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace hotspot::kernels
