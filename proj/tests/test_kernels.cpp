#include <doctest.h>

#include <cmath>
#include <random>

#include "hotspot/kernels.hpp"

using namespace hotspot::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> v(-10.0, 10.0);
  std::vector<double> out(n);
  for (double& x : out) x = v(rng);
  return out;
}

}  // namespace

TEST_CASE("scalar kernels on hand values") {
  const auto& s = scalar_table();
  const double a[] = {1, 2, 3};
  const double b[] = {4, -5, 6};
  CHECK(s.dot(a, b, 3) == 12.0);
  CHECK(s.sum_abs_diff(a, b, 3) == 3 + 7 + 3);
  CHECK(s.dot(a, b, 0) == 0.0);
  const double m[] = {1, 0, 2, 0, 1, 1};  // 2x3
  double y[2];
  s.matvec(m, a, y, 2, 3);
  CHECK(y[0] == 7.0);
  CHECK(y[1] == 5.0);
}

TEST_CASE("every available SIMD table agrees with the scalar reference") {
  std::mt19937_64 rng(61);
  const auto& ref = scalar_table();
  const auto tables = available();
  REQUIRE(!tables.empty());
  CHECK(tables.front()->isa == Isa::scalar);
  for (const auto* t : tables) {
    CAPTURE(to_string(t->isa));
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 17u, 31u, 64u, 100u, 257u}) {
      const auto a = random_vec(rng, n);
      const auto b = random_vec(rng, n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
      CHECK(std::abs(t->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= 1e-13 * (1 + mag));
      // Swapped arguments give the identical result in every table.
      CHECK(t->dot(a.data(), b.data(), n) == t->dot(b.data(), a.data(), n));
      const double sad = ref.sum_abs_diff(a.data(), b.data(), n);
      CHECK(std::abs(t->sum_abs_diff(a.data(), b.data(), n) - sad) <= 1e-13 * (1 + sad));

      const std::size_t rows = n % 7 + 1;
      const auto m = random_vec(rng, rows * n);
      std::vector<double> y_ref(rows), y(rows);
      ref.matvec(m.data(), a.data(), y_ref.data(), rows, n);
      t->matvec(m.data(), a.data(), y.data(), rows, n);
      for (std::size_t r = 0; r < rows; ++r) CHECK(std::abs(y[r] - y_ref[r]) <= 1e-12 * (1 + std::abs(y_ref[r]) + n * 100));
    }
  }
}

TEST_CASE("active table is one of the available tables") {
  const auto& act = active();
  bool found = false;
  for (const auto* t : available()) found = found || t->isa == act.isa;
  CHECK(found);
}
