#pragma once

// Closed-form statistics of threshold platooning under Poisson arrivals and
// the expected per-vehicle cost model built on them.
//
// Every function validates its scenario and rejects lambda * r above
// kMaxExponent with RangeError: beyond that the expected platoon size exceeds
// e^50 vehicles and the quantities stop being physically meaningful.

#include <cstdint>

#include "platoon/domain.hpp"

namespace platoon::analytic {

inline constexpr double kMaxExponent = 50.0;

struct PlatoonStatistics {
  double merge_probability = 0.0;
  double expected_platoon_size = 1.0;
  double expected_platoon_headway = 0.0;
  double expected_time_reduction = 0.0;
};

enum class Regime { interior_optimum, unbounded_decreasing };

const char* to_string(Regime regime) noexcept;

struct OptimalThreshold {
  Regime regime = Regime::interior_optimum;
  double r_star = 0.0;
  double cost_at_r_star = 0.0;
  bool clamped = false;  // closed-form optimum exceeded r_max
};

/// P(Y = y) = e^{-lambda r} (1 - e^{-lambda r})^{y-1}. Throws std::domain_error for y < 1.
double platoon_size_pmf(const ArrivalModel& arrival, const PlatoonPolicy& policy, std::int64_t y);

/// Smallest y_max such that the geometric tail (1 - e^{-lambda r})^{y_max} is below `tail`.
std::int64_t pmf_truncation_point(const ArrivalModel& arrival, const PlatoonPolicy& policy,
                                  double tail);

double merge_probability(const ArrivalModel& arrival, const PlatoonPolicy& policy);
double expected_platoon_size(const ArrivalModel& arrival, const PlatoonPolicy& policy);
double expected_platoon_headway(const ArrivalModel& arrival, const PlatoonPolicy& policy);
double expected_time_reduction(const ArrivalModel& arrival, const PlatoonPolicy& policy);

PlatoonStatistics platoon_statistics(const ArrivalModel& arrival, const PlatoonPolicy& policy);

/// Added drag fuel for one vehicle that crosses the merging zone `t_shift`
/// seconds faster than nominal. Requires 0 <= t_shift < d1 / v.
double exact_fuel_increase(const CostParameters& params, double t_shift);

/// First-order expansion of exact_fuel_increase in the time shift, in expectation.
double expected_fuel_increase_linearized(const CostParameters& params, const ArrivalModel& arrival,
                                         const PlatoonPolicy& policy);

double expected_fuel_saving_cruise(const CostParameters& params, const ArrivalModel& arrival,
                                   const PlatoonPolicy& policy);

/// Expected incremental cost per vehicle. Exactly zero at r = 0.
double expected_total_cost(const CostParameters& params, const ArrivalModel& arrival,
                           const PlatoonPolicy& policy);

double total_cost_derivative(const CostParameters& params, const ArrivalModel& arrival, double r);

/// Closed-form minimizer of expected_total_cost over [0, r_max].
OptimalThreshold optimal_threshold(const CostParameters& params, const ArrivalModel& arrival,
                                   double r_max);

/// Grid bracketing followed by golden-section refinement to a bracket of
/// width <= tol. Independent of the closed form.
double numeric_optimal_threshold(const CostParameters& params, const ArrivalModel& arrival,
                                 double r_max, double tol);

}  // namespace platoon::analytic
