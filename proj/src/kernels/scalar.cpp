#include "platoon/kernels.hpp"

namespace platoon::kernels {
namespace {

SumSquares sum_squares_scalar(std::span<const double> values, double center) {
  double lane_sum[4] = {0.0, 0.0, 0.0, 0.0};
  double lane_sq[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = values.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double x = values[i + j] - center;
      lane_sum[j] += x;
      lane_sq[j] += x * x;
    }
  }
  SumSquares out;
  out.sum = (lane_sum[0] + lane_sum[1]) + (lane_sum[2] + lane_sum[3]);
  out.sum_sq = (lane_sq[0] + lane_sq[1]) + (lane_sq[2] + lane_sq[3]);
  for (; i < n; ++i) {
    const double x = values[i] - center;
    out.sum += x;
    out.sum_sq += x * x;
  }
  return out;
}

std::size_t count_at_most_scalar(std::span<const double> values, double threshold) {
  std::size_t count = 0;
  for (const double x : values) {
    count += x <= threshold ? 1 : 0;
  }
  return count;
}

void indices_above_scalar(std::span<const double> values, double threshold, std::size_t base,
                          std::vector<std::size_t>& out) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > threshold) {
      out.push_back(base + i);
    }
  }
}

constexpr KernelTable kScalar{Isa::scalar, sum_squares_scalar, count_at_most_scalar,
                              indices_above_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace platoon::kernels
