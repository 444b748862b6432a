#include <bit>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "platoon/kernels.hpp"

using namespace platoon::kernels;

namespace {

std::vector<const KernelTable*> compiled_variants() {
  std::vector<const KernelTable*> out;
  for (const Isa isa : {Isa::avx2, Isa::neon}) {
    if (supported(isa)) {
      out.push_back(isa == Isa::avx2 ? avx2_kernels() : neon_kernels());
    }
  }
  return out;
}

std::vector<double> random_values(std::mt19937_64& gen, std::size_t n) {
  std::exponential_distribution<double> exp(0.02);
  std::vector<double> v(n);
  for (auto& x : v) x = exp(gen);
  return v;
}

// Plain sequential loop, independent of the lane-blocked order.
double naive_sum(const std::vector<double>& v) {
  long double s = 0.0L;
  for (const double x : v) s += x;
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("scalar reference kernels") {
  const std::vector<double> v{5, 3, 1, 8, 2, 2, 9};
  const auto& k = scalar_kernels();
  const auto s = k.sum_squares(v, 0.0);
  CHECK(s.sum == 30.0);
  CHECK(s.sum_sq == 25 + 9 + 1 + 64 + 4 + 4 + 81);
  const auto centered = k.sum_squares(v, 2.0);
  CHECK(centered.sum == 16.0);

  CHECK(k.count_at_most(v, 4.0) == 4);
  CHECK(k.count_at_most(v, 0.5) == 0);
  CHECK(k.count_at_most({}, 1.0) == 0);

  std::vector<std::size_t> idx;
  k.indices_above(v, 4.0, 1, idx);
  CHECK(idx == std::vector<std::size_t>{1, 4, 7});

  CHECK(k.sum_squares({}, 0.0).sum == 0.0);
}

TEST_CASE("lane-blocked sum stays close to a sequential sum") {
  std::mt19937_64 gen(5);
  for (const std::size_t n : {1u, 3u, 4u, 7u, 1000u, 100003u}) {
    const auto v = random_values(gen, n);
    const double s = scalar_kernels().sum_squares(v, 0.0).sum;
    CHECK(s == doctest::Approx(naive_sum(v)).epsilon(1e-12));
  }
}

TEST_CASE("every SIMD variant is bit-identical to the scalar reference") {
  const auto variants = compiled_variants();
  MESSAGE("active kernels: " << std::string(to_string(active().isa)) << ", SIMD variants under test: "
                             << variants.size());
  std::mt19937_64 gen(77);
  const auto& ref = scalar_kernels();
  for (const auto* simd : variants) {
    for (std::size_t n = 0; n <= 67; ++n) {
      auto v = random_values(gen, n);
      // Exact ties with the threshold, zeros, and a NaN.
      if (n > 2) v[1] = 40.0;
      if (n > 5) v[4] = 0.0;
      if (n > 9) v[9] = std::nan("");
      for (const double center : {0.0, 50.0}) {
        const auto a = ref.sum_squares(v, center);
        const auto b = simd->sum_squares(v, center);
        CHECK(std::bit_cast<std::uint64_t>(a.sum) == std::bit_cast<std::uint64_t>(b.sum));
        CHECK(std::bit_cast<std::uint64_t>(a.sum_sq) == std::bit_cast<std::uint64_t>(b.sum_sq));
      }
      for (const double thr : {0.0, 40.0, 50.0, 1e9}) {
        CHECK(ref.count_at_most(v, thr) == simd->count_at_most(v, thr));
        std::vector<std::size_t> ia, ib;
        ref.indices_above(v, thr, 2, ia);
        simd->indices_above(v, thr, 2, ib);
        CHECK(ia == ib);
      }
    }
    const auto big = random_values(gen, 1 << 20);
    const auto a = ref.sum_squares(big, 0.0);
    const auto b = simd->sum_squares(big, 0.0);
    CHECK(a.sum == b.sum);
    CHECK(a.sum_sq == b.sum_sq);
    CHECK(ref.count_at_most(big, 50.0) == simd->count_at_most(big, 50.0));
  }
}

TEST_CASE("dispatch") {
  CHECK(supported(Isa::scalar));
  const Isa original = active().isa;
  CHECK(supported(original));
  CHECK(set_active(Isa::scalar));
  CHECK(active().isa == Isa::scalar);
  CHECK(set_active(original));
  CHECK(active().isa == original);
#if defined(__x86_64__)
  CHECK_FALSE(set_active(Isa::neon));
  CHECK(neon_kernels() == nullptr);
#endif
}
