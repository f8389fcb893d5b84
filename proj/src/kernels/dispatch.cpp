#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels/kernels_internal.hpp"

namespace vprkit::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(VPRKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") &&
         __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

const KernelTable* select_default() noexcept {
  if (const char* forced = std::getenv("VPRKIT_KERNELS")) {
    if (std::string_view(forced) == "scalar") return &scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{select_default()};
  return current;
}

}  // namespace

const KernelTable* avx2_table() noexcept {
#if defined(VPRKIT_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void set_active(const KernelTable& table) noexcept {
  slot().store(&table, std::memory_order_release);
}

}  // namespace vprkit::kernels
