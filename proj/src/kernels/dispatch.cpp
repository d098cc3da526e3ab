#include <cstdlib>
#include <string>

#include "hotspot/kernels.hpp"

namespace hotspot::kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* forced = std::getenv("HOTSPOT_SIMD"); forced && std::string(forced) == "scalar") {
    return scalar_table();
  }
  if (const auto* t = detail::avx2_table(); t && cpu_has_avx2_fma()) return *t;
  // NEON is architecturally mandatory on AArch64.
  if (const auto* t = detail::neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (const auto* t = detail::avx2_table(); t && cpu_has_avx2_fma()) out.push_back(t);
  if (const auto* t = detail::neon_table()) out.push_back(t);
  return out;
}

}  // namespace hotspot::kernels
