// Compiled with -mavx2 only; callers must check supported(Isa::avx2) first.

#include <immintrin.h>

#include <bit>
#include <cstdint>

#include "platoon/kernels.hpp"

namespace platoon::kernels {
namespace {

SumSquares sum_squares_avx2(std::span<const double> values, double center) {
  const double* data = values.data();
  const std::size_t n = values.size();
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc_sum = _mm256_setzero_pd();
  __m256d acc_sq = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_sub_pd(_mm256_loadu_pd(data + i), c);
    acc_sum = _mm256_add_pd(acc_sum, x);
    acc_sq = _mm256_add_pd(acc_sq, _mm256_mul_pd(x, x));
  }
  alignas(32) double lane_sum[4];
  alignas(32) double lane_sq[4];
  _mm256_store_pd(lane_sum, acc_sum);
  _mm256_store_pd(lane_sq, acc_sq);

  SumSquares out;
  out.sum = (lane_sum[0] + lane_sum[1]) + (lane_sum[2] + lane_sum[3]);
  out.sum_sq = (lane_sq[0] + lane_sq[1]) + (lane_sq[2] + lane_sq[3]);
  for (; i < n; ++i) {
    const double x = data[i] - center;
    out.sum += x;
    out.sum_sq += x * x;
  }
  return out;
}

std::size_t count_at_most_avx2(std::span<const double> values, double threshold) {
  const double* data = values.data();
  const std::size_t n = values.size();
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d le = _mm256_cmp_pd(_mm256_loadu_pd(data + i), thr, _CMP_LE_OQ);
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(le))));
  }
  for (; i < n; ++i) {
    count += data[i] <= threshold ? 1 : 0;
  }
  return count;
}

void indices_above_avx2(std::span<const double> values, double threshold, std::size_t base,
                        std::vector<std::size_t>& out) {
  const double* data = values.data();
  const std::size_t n = values.size();
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gt = _mm256_cmp_pd(_mm256_loadu_pd(data + i), thr, _CMP_GT_OQ);
    auto mask = static_cast<unsigned>(_mm256_movemask_pd(gt));
    while (mask != 0) {
      out.push_back(base + i + static_cast<std::size_t>(std::countr_zero(mask)));
      mask &= mask - 1;
    }
  }
  for (; i < n; ++i) {
    if (data[i] > threshold) {
      out.push_back(base + i);
    }
  }
}

constexpr KernelTable kAvx2{Isa::avx2, sum_squares_avx2, count_at_most_avx2, indices_above_avx2};

}  // namespace

const KernelTable* avx2_kernels() noexcept { return &kAvx2; }

}  // namespace platoon::kernels
