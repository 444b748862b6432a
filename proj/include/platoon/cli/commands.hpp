#pragma once

// platoonctl subcommands. Each returns the process exit code:
//   0 success / all comparisons pass
//   1 statistical comparison failure (simulate only)
//   2 usage or configuration error (raised as exceptions, mapped by main)

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "platoon/analytic.hpp"
#include "platoon/cli/config.hpp"
#include "platoon/simulator.hpp"

namespace platoon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComparisonFailed = 1;
inline constexpr int kExitUsage = 2;

/// Floor on the denominator of relative errors.
inline constexpr double kRelativeErrorFloor = 1e-12;

double relative_error(double empirical, double analytic) noexcept;

struct ComparisonRow {
  std::string statistic;
  double analytic = 0.0;
  double empirical = 0.0;
  double half_width = 0.0;
  double relative_error = 0.0;
  std::uint64_t samples = 0;
  bool pass = false;
};

struct ComparisonReport {
  double sigma = 3.0;
  std::vector<ComparisonRow> rows;

  bool all_pass() const noexcept;
};

/// Compares every closed form against the pooled simulation. A row passes
/// when |empirical - analytic| <= sigma * half_width. Mean rows use the
/// empirical 95% half-width; probability rows (merge probability and the
/// platoon-size PMF) use the half-width evaluated at the analytic probability,
/// so events that are rare under the model still get a finite tolerance.
ComparisonReport compare(const ArrivalModel& arrival, const PlatoonPolicy& policy,
                         const sim::EmpiricalSummary& summary, double sigma);

void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

struct AnalyticRow {
  double merge_probability = 0.0;
  double expected_platoon_size = 0.0;
  double expected_platoon_headway = 0.0;
  double expected_time_reduction = 0.0;
  double expected_fuel_increase = 0.0;
  double expected_fuel_saving = 0.0;
  double expected_total_cost = 0.0;
};

AnalyticRow evaluate(const CostParameters& params, const ArrivalModel& arrival,
                     const PlatoonPolicy& policy);

struct SweepSpec {
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t n_points = 2;
};

void validate(const SweepSpec& spec);

/// Linear grid; the last point is exactly r_max.
std::vector<double> sweep_grid(const SweepSpec& spec);

struct SweepRow {
  double r = 0.0;
  AnalyticRow analytic;
  std::optional<sim::EmpiricalSummary> simulated;
};

std::vector<SweepRow> sweep(const ScenarioConfig& config, const SweepSpec& spec,
                            bool with_simulation);

void write_sweep_csv(std::ostream& out, const CostParameters& params,
                     const std::vector<SweepRow>& rows);

struct AnalyticOptions {
  std::string config_path;
  std::optional<std::string> json_path;
};

struct SimulateOptions {
  std::string config_path;
  std::optional<std::string> csv_path;
  std::optional<double> sigma;
};

struct SweepOptions {
  std::string config_path;
  SweepSpec spec;
  bool with_simulation = false;
  std::string csv_path;
};

struct OptimizeOptions {
  std::string config_path;
  double r_max = 0.0;
  double tol = 1e-3;
};

int cmd_analytic(const AnalyticOptions& options, std::ostream& out);
int cmd_simulate(const SimulateOptions& options, std::ostream& out);
int cmd_sweep(const SweepOptions& options, std::ostream& out);
int cmd_optimize(const OptimizeOptions& options, std::ostream& out);

}  // namespace platoon::cli
