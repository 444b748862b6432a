#include "platoon/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "platoon/kernels.hpp"
#include "platoon/rng.hpp"

namespace platoon::sim {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Estimate proportion_estimate(std::uint64_t hits, std::uint64_t trials) noexcept {
  if (trials == 0) {
    return {kNaN, kNaN, 0};
  }
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  const double hw = kZ95 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return {p, hw, trials};
}

}  // namespace

void validate(const SimulationConfig& config) {
  validate_scenario(config.arrival, config.policy);
  if (config.n_vehicles < 2) {
    throw ValidationError("n_vehicles", "n_vehicles must be ≥ 2");
  }
  if (config.n_replications < 1) {
    throw ValidationError("n_replications", "n_replications must be ≥ 1");
  }
  if (config.warmup_vehicles >= config.n_vehicles) {
    throw ValidationError("warmup_vehicles", "warmup_vehicles must be < n_vehicles");
  }
  if (config.pmf_cutoff < 1) {
    throw ValidationError("pmf_cutoff", "pmf_cutoff must be ≥ 1");
  }
}

double interarrival_from_uniform(double u, double lambda) noexcept {
  return 0.0 - std::log(u) / lambda;
}

std::vector<double> sample_interarrivals(std::uint64_t seed, std::uint64_t n,
                                         const ArrivalModel& arrival, std::uint64_t replication) {
  validate_scenario(arrival, PlatoonPolicy{});
  if (n < 1) {
    throw ValidationError("n", "n must be ≥ 1");
  }
  ReplicationStream stream(seed, replication);
  std::vector<double> out(n);
  for (auto& x : out) {
    x = interarrival_from_uniform(stream.next_uniform(), arrival.lambda);
  }
  return out;
}

PlatoonPartition form_platoons(std::span<const double> interarrivals,
                               const PlatoonPolicy& policy) {
  if (interarrivals.empty()) {
    throw std::invalid_argument("form_platoons: empty interarrival sequence");
  }
  PlatoonPartition out;
  out.leaders.push_back(1);
  // Vehicle k >= 2 leads a new platoon iff X_k > r; X_k sits at position k - 1.
  std::vector<std::size_t> boundaries;
  kernels::active().indices_above(interarrivals.subspan(1), policy.threshold_r, 2, boundaries);
  out.leaders.insert(out.leaders.end(), boundaries.begin(), boundaries.end());

  const auto n = static_cast<std::uint64_t>(interarrivals.size());
  out.sizes.reserve(out.leaders.size());
  for (std::size_t i = 0; i < out.leaders.size(); ++i) {
    const std::uint64_t end = i + 1 < out.leaders.size() ? out.leaders[i + 1] : n + 1;
    out.sizes.push_back(end - out.leaders[i]);
  }
  return out;
}

std::vector<double> compute_time_shifts(std::span<const double> interarrivals,
                                        const PlatoonPolicy& policy) {
  if (interarrivals.empty()) {
    throw std::invalid_argument("compute_time_shifts: empty interarrival sequence");
  }
  std::vector<double> shifts(interarrivals.size(), 0.0);
  for (std::size_t k = 1; k < interarrivals.size(); ++k) {
    const double x = interarrivals[k];
    shifts[k] = policy.merges(x) ? x + shifts[k - 1] : 0.0;
  }
  return shifts;
}

std::vector<double> platoon_leader_headways(std::span<const double> interarrivals,
                                            std::span<const std::uint64_t> leader_indices) {
  std::vector<double> out;
  if (leader_indices.size() < 2) {
    return out;
  }
  out.reserve(leader_indices.size() - 1);
  for (std::size_t n = 1; n < leader_indices.size(); ++n) {
    const std::uint64_t from = leader_indices[n - 1];
    const std::uint64_t to = leader_indices[n];
    if (from < 1 || to <= from || to > interarrivals.size()) {
      throw std::invalid_argument("platoon_leader_headways: leader indices must be increasing and in range");
    }
    // X_{from+1} + ... + X_{to}, i.e. positions [from, to).
    double z = 0.0;
    for (std::uint64_t k = from; k < to; ++k) {
      z += interarrivals[k];
    }
    out.push_back(z);
  }
  return out;
}

SimulationRun build_run(std::vector<double> interarrivals, const PlatoonPolicy& policy) {
  SimulationRun run;
  run.policy = policy;
  auto partition = form_platoons(interarrivals, policy);
  run.time_shifts = compute_time_shifts(interarrivals, policy);
  run.leader_headways = platoon_leader_headways(interarrivals, partition.leaders);
  run.platoon_sizes = std::move(partition.sizes);
  run.leader_indices = std::move(partition.leaders);
  run.interarrivals = std::move(interarrivals);
  return run;
}

SimulationRun simulate_run(const SimulationConfig& config, std::uint64_t replication) {
  validate(config);
  return build_run(
      sample_interarrivals(config.seed, config.n_vehicles, config.arrival, replication),
      config.policy);
}

// -- accumulators ------------------------------------------------------------

void MomentAccumulator::add(std::span<const double> values) {
  if (values.empty()) {
    return;
  }
  const auto& k = kernels::active();
  const double n = static_cast<double>(values.size());
  const double center = k.sum_squares(values, 0.0).sum / n;
  const auto dev = k.sum_squares(values, center);
  MomentAccumulator batch;
  batch.count_ = values.size();
  batch.mean_ = center + dev.sum / n;
  batch.m2_ = std::max(0.0, dev.sum_sq - dev.sum * dev.sum / n);
  merge(batch);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.count_ == 0) {
    return;
  }
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * (nb / total);
  m2_ += other.m2_ + delta * delta * (na * nb / total);
  count_ += other.count_;
}

double MomentAccumulator::sample_variance() const noexcept {
  return count_ < 2 ? kNaN : m2_ / static_cast<double>(count_ - 1);
}

Estimate MomentAccumulator::estimate() const noexcept {
  if (count_ == 0) {
    return {kNaN, kNaN, 0};
  }
  const double hw = count_ < 2 ? kNaN
                               : kZ95 * std::sqrt(sample_variance() / static_cast<double>(count_));
  return {mean_, hw, count_};
}

void RatioAccumulator::add_cycle(double total, double length) noexcept {
  ++cycles_;
  sum_a_ += total;
  sum_n_ += length;
  sum_aa_ += total * total;
  sum_an_ += total * length;
  sum_nn_ += length * length;
}

void RatioAccumulator::merge(const RatioAccumulator& other) noexcept {
  cycles_ += other.cycles_;
  sum_a_ += other.sum_a_;
  sum_n_ += other.sum_n_;
  sum_aa_ += other.sum_aa_;
  sum_an_ += other.sum_an_;
  sum_nn_ += other.sum_nn_;
}

Estimate RatioAccumulator::estimate() const noexcept {
  const auto units = static_cast<std::uint64_t>(sum_n_);
  if (cycles_ == 0 || sum_n_ <= 0.0) {
    return {kNaN, kNaN, units};
  }
  const double mean = sum_a_ / sum_n_;
  if (cycles_ < 2) {
    return {mean, kNaN, units};
  }
  // Residuals e_i = a_i - mean * n_i.
  const double ss = std::max(0.0, sum_aa_ - 2.0 * mean * sum_an_ + mean * mean * sum_nn_);
  const double m = static_cast<double>(cycles_);
  const double mean_length = sum_n_ / m;
  const double hw = kZ95 * std::sqrt(ss / (m - 1.0) / m) / mean_length;
  return {mean, hw, units};
}

Estimate EmpiricalSummary::merge_fraction() const noexcept {
  return proportion_estimate(merges, merge_trials);
}

Estimate EmpiricalSummary::size_frequency(std::size_t y) const {
  if (y < 1 || y > size_counts.size()) {
    throw std::out_of_range("size_frequency: y outside [1, pmf_cutoff]");
  }
  return proportion_estimate(size_counts[y - 1], platoon_size.count());
}

std::vector<double> EmpiricalSummary::size_pmf() const {
  std::vector<double> out(size_counts.size(), kNaN);
  for (std::size_t y = 1; y <= size_counts.size(); ++y) {
    out[y - 1] = size_frequency(y).mean;
  }
  return out;
}

void EmpiricalSummary::merge(const EmpiricalSummary& other) {
  if (size_counts.empty()) {
    size_counts.assign(other.size_counts.size(), 0);
  }
  if (other.size_counts.size() != size_counts.size()) {
    throw std::invalid_argument("EmpiricalSummary::merge: pmf cutoffs differ");
  }
  platoon_size.merge(other.platoon_size);
  leader_headway.merge(other.leader_headway);
  interarrival.merge(other.interarrival);
  time_shift.merge(other.time_shift);
  merges += other.merges;
  merge_trials += other.merge_trials;
  for (std::size_t i = 0; i < size_counts.size(); ++i) {
    size_counts[i] += other.size_counts[i];
  }
}

EmpiricalSummary summarize(const SimulationRun& run, std::uint64_t warmup_vehicles,
                           std::size_t pmf_cutoff) {
  const std::uint64_t n = run.interarrivals.size();
  if (warmup_vehicles >= n) {
    throw std::invalid_argument("summarize: no vehicles after the warmup of " +
                                std::to_string(warmup_vehicles));
  }
  if (pmf_cutoff < 1) {
    throw std::invalid_argument("summarize: pmf_cutoff must be >= 1");
  }
  EmpiricalSummary out;
  out.size_counts.assign(pmf_cutoff, 0);

  if (run.platoon_sizes.size() > 1) {
    std::vector<double> complete(run.platoon_sizes.begin(), run.platoon_sizes.end() - 1);
    out.platoon_size.add(complete);
    for (const double y : complete) {
      if (y <= static_cast<double>(pmf_cutoff)) {
        ++out.size_counts[static_cast<std::size_t>(y) - 1];
      }
    }
  }
  out.leader_headway.add(run.leader_headways);
  out.interarrival.add(run.interarrivals);

  const auto tail = std::span<const double>(run.interarrivals).subspan(1);
  out.merges = kernels::active().count_at_most(tail, run.policy.threshold_r);
  out.merge_trials = tail.size();

  // Cycles start at the first post-warmup vehicle and at every later leader.
  std::uint64_t start = warmup_vehicles + 1;
  auto next_leader = std::upper_bound(run.leader_indices.begin(), run.leader_indices.end(), start);
  while (start <= n) {
    const std::uint64_t end = next_leader != run.leader_indices.end() ? *next_leader : n + 1;
    const double total = std::accumulate(run.time_shifts.begin() + static_cast<std::ptrdiff_t>(start - 1),
                                         run.time_shifts.begin() + static_cast<std::ptrdiff_t>(end - 1), 0.0);
    out.time_shift.add_cycle(total, static_cast<double>(end - start));
    start = end;
    if (next_leader != run.leader_indices.end()) {
      ++next_leader;
    }
  }
  return out;
}

EmpiricalSummary pool(std::span<const EmpiricalSummary> summaries) {
  EmpiricalSummary out;
  for (const auto& s : summaries) {
    out.merge(s);
  }
  return out;
}

ReplicationResult run_replications(const SimulationConfig& config) {
  validate(config);
  const std::uint64_t count = config.n_replications;
  std::vector<EmpiricalSummary> per(count);
  std::vector<std::exception_ptr> errors(count);

  unsigned workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, count));

  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        per[i] = summarize(simulate_run(config, i), config.warmup_vehicles, config.pmf_cutoff);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool_threads;
    pool_threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool_threads.emplace_back(work);
    }
  }

  for (std::uint64_t i = 0; i < count; ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        throw ReplicationError(i, e.what());
      }
    }
  }
  ReplicationResult result;
  result.aggregate = pool(per);
  result.per_replication = std::move(per);
  return result;
}

}  // namespace platoon::sim
