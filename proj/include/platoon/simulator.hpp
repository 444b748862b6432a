#pragma once

// Monte Carlo realization of Poisson arrivals and threshold platoon formation.
//
// Vehicle indices in this interface are 1-based to match the usual X_k / T_k
// numbering; container positions are 0-based (vehicle k lives at [k - 1]).

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "platoon/domain.hpp"

namespace platoon::sim {

inline constexpr double kZ95 = 1.96;

struct SimulationConfig {
  ArrivalModel arrival;
  PlatoonPolicy policy;
  std::uint64_t n_vehicles = 2;
  std::uint64_t n_replications = 1;
  std::uint64_t seed = 0;
  std::uint64_t warmup_vehicles = 0;  // excluded from time-shift statistics
  std::size_t pmf_cutoff = 10;
  unsigned threads = 0;  // 0 picks std::thread::hardware_concurrency()
};

void validate(const SimulationConfig& config);

struct PlatoonPartition {
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint64_t> leaders;  // 1-based vehicle index of each platoon's first vehicle
};

struct SimulationRun {
  PlatoonPolicy policy;
  std::vector<double> interarrivals;    // X_1..X_n
  std::vector<std::uint64_t> platoon_sizes;
  std::vector<std::uint64_t> leader_indices;
  std::vector<double> leader_headways;  // Z_2..Z_m
  std::vector<double> time_shifts;      // T_1..T_n
};

/// Exponential inverse CDF, -ln(u) / lambda for u in (0, 1]. u = 1 maps to +0.
double interarrival_from_uniform(double u, double lambda) noexcept;

std::vector<double> sample_interarrivals(std::uint64_t seed, std::uint64_t n,
                                         const ArrivalModel& arrival,
                                         std::uint64_t replication = 0);

PlatoonPartition form_platoons(std::span<const double> interarrivals, const PlatoonPolicy& policy);

/// T_1 = 0; T_k = X_k + T_{k-1} when X_k <= r, else 0.
std::vector<double> compute_time_shifts(std::span<const double> interarrivals,
                                        const PlatoonPolicy& policy);

/// Z between consecutive platoons: S_{d_n} - S_{d_{n-1}} summed from the
/// interarrivals. Empty with fewer than two platoons.
std::vector<double> platoon_leader_headways(std::span<const double> interarrivals,
                                            std::span<const std::uint64_t> leader_indices);

SimulationRun build_run(std::vector<double> interarrivals, const PlatoonPolicy& policy);

SimulationRun simulate_run(const SimulationConfig& config, std::uint64_t replication);

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal-approximation; NaN with < 2 samples
  std::uint64_t samples = 0;
};

/// Count, mean and sum of squared deviations; merges with Chan's update.
class MomentAccumulator {
 public:
  void add(std::span<const double> values);
  void merge(const MomentAccumulator& other);

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double sample_variance() const noexcept;
  Estimate estimate() const noexcept;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Regenerative ratio estimator for per-vehicle quantities correlated within
/// a platoon. Each platoon is a cycle contributing (sum of values, vehicles).
class RatioAccumulator {
 public:
  void add_cycle(double total, double length) noexcept;
  void merge(const RatioAccumulator& other) noexcept;

  std::uint64_t cycles() const noexcept { return cycles_; }
  double units() const noexcept { return sum_n_; }
  Estimate estimate() const noexcept;

 private:
  std::uint64_t cycles_ = 0;
  double sum_a_ = 0.0;
  double sum_n_ = 0.0;
  double sum_aa_ = 0.0;
  double sum_an_ = 0.0;
  double sum_nn_ = 0.0;
};

struct EmpiricalSummary {
  MomentAccumulator platoon_size;    // complete platoons only
  MomentAccumulator leader_headway;
  MomentAccumulator interarrival;
  RatioAccumulator time_shift;       // post-warmup vehicles
  std::uint64_t merges = 0;          // X_k <= r over k >= 2
  std::uint64_t merge_trials = 0;
  std::vector<std::uint64_t> size_counts;  // [y - 1] for y = 1..pmf_cutoff

  Estimate mean_platoon_size() const noexcept { return platoon_size.estimate(); }
  Estimate mean_leader_headway() const noexcept { return leader_headway.estimate(); }
  Estimate mean_time_shift() const noexcept { return time_shift.estimate(); }
  Estimate mean_interarrival() const noexcept { return interarrival.estimate(); }
  Estimate merge_fraction() const noexcept;
  /// Empirical P(Y = y) over complete platoons, y in [1, pmf_cutoff].
  Estimate size_frequency(std::size_t y) const;
  std::vector<double> size_pmf() const;

  void merge(const EmpiricalSummary& other);
};

/// The final platoon is right-censored and left out of size statistics.
/// Throws std::invalid_argument when no vehicle lies beyond the warmup.
EmpiricalSummary summarize(const SimulationRun& run, std::uint64_t warmup_vehicles,
                           std::size_t pmf_cutoff);

class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(std::uint64_t replication, const std::string& what)
      : std::runtime_error("replication " + std::to_string(replication) + ": " + what),
        replication_(replication) {}

  std::uint64_t replication() const noexcept { return replication_; }

 private:
  std::uint64_t replication_;
};

struct ReplicationResult {
  EmpiricalSummary aggregate;
  std::vector<EmpiricalSummary> per_replication;
};

/// Runs replications (possibly in parallel) and pools them in index order,
/// so the aggregate does not depend on scheduling.
ReplicationResult run_replications(const SimulationConfig& config);

/// Pools summaries in the order given.
EmpiricalSummary pool(std::span<const EmpiricalSummary> summaries);

}  // namespace platoon::sim
