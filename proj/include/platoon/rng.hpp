#pragma once

#include <cstdint>
#include <random>

namespace platoon {

/// Random stream for one simulation replication.
///
/// The engine is std::mt19937_64 (period 2^19937 - 1). Its state is derived by
/// std::seed_seq from the four 32-bit words {seed lo, seed hi, replication lo,
/// replication hi}, so (seed, replication) fully determines the stream and
/// distinct replication indices give distinct, independently seeded streams.
/// Both the engine and seed_seq are fully specified by the C++ standard, so
/// streams are reproducible across standard libraries.
class ReplicationStream {
 public:
  ReplicationStream(std::uint64_t seed, std::uint64_t replication);

  /// Uniform on (0, 1] with 53 bits of resolution: ((bits >> 11) + 1) / 2^53.
  double next_uniform() noexcept;

 private:
  std::mt19937_64 engine_;
};

}  // namespace platoon
