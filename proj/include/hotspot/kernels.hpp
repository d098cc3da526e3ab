#pragma once

// Data-parallel inner loops shared by the power iterations and the
// correlation code. Every kernel has a scalar reference implementation and,
// where the target supports it, an AVX2+FMA (x86-64) or NEON (AArch64)
// variant. The variant is chosen once per process from the CPU features; set
// HOTSPOT_SIMD=scalar to force the reference path.
//
// All kernels are symmetric in their two vector arguments: dot(a, b) and
// dot(b, a) return bit-identical results.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hotspot::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
  // y[r] = sum_c m[r * n + c] * x[c] for r in [0, rows), row-major m.
  void (*matvec)(const double* m, const double* x, double* y, std::size_t rows, std::size_t n);
};

// Table for the best ISA this CPU supports (respecting HOTSPOT_SIMD).
const KernelTable& active();

// Every table compiled in and runnable on this CPU, scalar first.
std::vector<const KernelTable*> available();

const KernelTable& scalar_table() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
  return active().sum_abs_diff(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

// Dense row-major square matrix-vector product.
inline void matvec(std::span<const double> m, std::span<const double> x, std::span<double> y) {
  active().matvec(m.data(), x.data(), y.data(), y.size(), x.size());
}

namespace detail {
// Defined in the per-ISA translation units; null when not compiled in.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;
}  // namespace detail

}  // namespace hotspot::kernels
