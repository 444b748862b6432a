#include <arm_neon.h>

#include "platoon/kernels.hpp"

namespace platoon::kernels {
namespace {

// Two float64x2 accumulators hold lanes {0,1} and {2,3} of the reference order.
SumSquares sum_squares_neon(std::span<const double> values, double center) {
  const double* data = values.data();
  const std::size_t n = values.size();
  const float64x2_t c = vdupq_n_f64(center);
  float64x2_t sum_lo = vdupq_n_f64(0.0);
  float64x2_t sum_hi = vdupq_n_f64(0.0);
  float64x2_t sq_lo = vdupq_n_f64(0.0);
  float64x2_t sq_hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t lo = vsubq_f64(vld1q_f64(data + i), c);
    const float64x2_t hi = vsubq_f64(vld1q_f64(data + i + 2), c);
    sum_lo = vaddq_f64(sum_lo, lo);
    sum_hi = vaddq_f64(sum_hi, hi);
    sq_lo = vaddq_f64(sq_lo, vmulq_f64(lo, lo));
    sq_hi = vaddq_f64(sq_hi, vmulq_f64(hi, hi));
  }
  SumSquares out;
  out.sum = (vgetq_lane_f64(sum_lo, 0) + vgetq_lane_f64(sum_lo, 1)) +
            (vgetq_lane_f64(sum_hi, 0) + vgetq_lane_f64(sum_hi, 1));
  out.sum_sq = (vgetq_lane_f64(sq_lo, 0) + vgetq_lane_f64(sq_lo, 1)) +
               (vgetq_lane_f64(sq_hi, 0) + vgetq_lane_f64(sq_hi, 1));
  for (; i < n; ++i) {
    const double x = data[i] - center;
    out.sum += x;
    out.sum_sq += x * x;
  }
  return out;
}

std::size_t count_at_most_neon(std::span<const double> values, double threshold) {
  const double* data = values.data();
  const std::size_t n = values.size();
  const float64x2_t thr = vdupq_n_f64(threshold);
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // All-ones lanes shifted down to 1.
    acc = vaddq_u64(acc, vshrq_n_u64(vcleq_f64(vld1q_f64(data + i), thr), 63));
  }
  std::size_t count = static_cast<std::size_t>(vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1));
  for (; i < n; ++i) {
    count += data[i] <= threshold ? 1 : 0;
  }
  return count;
}

void indices_above_neon(std::span<const double> values, double threshold, std::size_t base,
                        std::vector<std::size_t>& out) {
  const double* data = values.data();
  const std::size_t n = values.size();
  const float64x2_t thr = vdupq_n_f64(threshold);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t gt = vcgtq_f64(vld1q_f64(data + i), thr);
    if ((vgetq_lane_u64(gt, 0) | vgetq_lane_u64(gt, 1)) == 0) {
      continue;
    }
    if (vgetq_lane_u64(gt, 0) != 0) {
      out.push_back(base + i);
    }
    if (vgetq_lane_u64(gt, 1) != 0) {
      out.push_back(base + i + 1);
    }
  }
  for (; i < n; ++i) {
    if (data[i] > threshold) {
      out.push_back(base + i);
    }
  }
}

constexpr KernelTable kNeon{Isa::neon, sum_squares_neon, count_at_most_neon, indices_above_neon};

}  // namespace

const KernelTable* neon_kernels() noexcept { return &kNeon; }

}  // namespace platoon::kernels
