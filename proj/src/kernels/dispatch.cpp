#include <atomic>

#include "platoon/kernels.hpp"

namespace platoon::kernels {

#if !defined(PLATOON_HAVE_AVX2)
const KernelTable* avx2_kernels() noexcept { return nullptr; }
#endif

#if !defined(PLATOON_HAVE_NEON)
const KernelTable* neon_kernels() noexcept { return nullptr; }
#endif

namespace {

const KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return &scalar_kernels();
    case Isa::avx2:
      return avx2_kernels();
    case Isa::neon:
      return neon_kernels();
  }
  return nullptr;
}

bool cpu_has(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(PLATOON_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
      // Advanced SIMD is mandatory on AArch64.
#if defined(PLATOON_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* detect() noexcept {
  for (const Isa isa : {Isa::avx2, Isa::neon}) {
    if (supported(isa)) {
      return table_for(isa);
    }
  }
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& selected() noexcept {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept { return table_for(isa) != nullptr && cpu_has(isa); }

const KernelTable& active() noexcept { return *selected().load(std::memory_order_acquire); }

bool set_active(Isa isa) noexcept {
  if (!supported(isa)) {
    return false;
  }
  selected().store(table_for(isa), std::memory_order_release);
  return true;
}

}  // namespace platoon::kernels
