#pragma once

// Data-parallel inner loops used by the simulator.
//
// Each kernel has a scalar reference implementation and optional AVX2 / NEON
// variants. All variants return bit-identical results: the scalar reference
// accumulates in the same four-lane order the vector units use, so switching
// instruction sets never changes simulator output.

#include <cstddef>
#include <span>
#include <vector>

namespace platoon::kernels {

enum class Isa { scalar, avx2, neon };

const char* to_string(Isa isa) noexcept;

struct SumSquares {
  double sum = 0.0;
  double sum_sq = 0.0;
};

struct KernelTable {
  Isa isa;
  // Sum and sum of squares of (values[i] - center), lane-blocked: element i
  // goes to lane i % 4 for the full blocks, lanes combine as
  // (l0 + l1) + (l2 + l3), then the tail is added sequentially.
  SumSquares (*sum_squares)(std::span<const double> values, double center);
  // Number of elements <= threshold. NaN never counts.
  std::size_t (*count_at_most)(std::span<const double> values, double threshold);
  // Appends, in increasing order, base + i for every values[i] > threshold.
  void (*indices_above)(std::span<const double> values, double threshold, std::size_t base,
                        std::vector<std::size_t>& out);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the variant was not compiled into this build.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

/// True when the variant is compiled in and the running CPU supports it.
bool supported(Isa isa) noexcept;

/// Best supported variant, chosen once at first use.
const KernelTable& active() noexcept;

/// Overrides the runtime choice. Returns false (and changes nothing) if the
/// variant is unsupported here. Not synchronized with concurrent kernel use.
bool set_active(Isa isa) noexcept;

}  // namespace platoon::kernels
