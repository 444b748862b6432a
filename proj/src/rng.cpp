#include "platoon/rng.hpp"

namespace platoon {
namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t replication) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(replication),
      static_cast<std::uint32_t>(replication >> 32),
  };
  return std::mt19937_64(seq);
}

}  // namespace

ReplicationStream::ReplicationStream(std::uint64_t seed, std::uint64_t replication)
    : engine_(make_engine(seed, replication)) {}

double ReplicationStream::next_uniform() noexcept {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return static_cast<double>((engine_() >> 11) + 1) * kScale;
}

}  // namespace platoon
