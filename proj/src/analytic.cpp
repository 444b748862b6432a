#include "platoon/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace platoon::analytic {
namespace {

// lambda * r after validation and range checking.
double checked_exponent(const ArrivalModel& arrival, const PlatoonPolicy& policy) {
  validate_scenario(arrival, policy);
  const double x = arrival.lambda * policy.threshold_r;
  if (x > kMaxExponent) {
    throw RangeError("lambda * threshold_r = " + std::to_string(x) + " exceeds " +
                     std::to_string(kMaxExponent));
  }
  return x;
}

// e^x - 1 - x without cancellation for small x.
double expm1_minus_x(double x) {
  if (std::abs(x) < 0.05) {
    // x^2/2! + x^3/3! + ... ; 9 terms reach double precision for |x| < 0.05.
    double term = x * x / 2.0;
    double sum = term;
    for (int k = 3; k <= 10; ++k) {
      term *= x / k;
      sum += term;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

double cost_at(const CostParameters& params, const ArrivalModel& arrival, double r) {
  return expected_total_cost(params, arrival, PlatoonPolicy{r});
}

void require_positive_finite(const char* name, double value) {
  if (!(std::isfinite(value) && value > 0.0)) {
    throw ValidationError(name, std::string(name) + " must be > 0");
  }
}

}  // namespace

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::interior_optimum:
      return "interior_optimum";
    case Regime::unbounded_decreasing:
      return "unbounded_decreasing";
  }
  return "unknown";
}

double platoon_size_pmf(const ArrivalModel& arrival, const PlatoonPolicy& policy, std::int64_t y) {
  if (y < 1) {
    throw std::domain_error("platoon size must be >= 1, got " + std::to_string(y));
  }
  const double x = checked_exponent(arrival, policy);
  const double p = -std::expm1(-x);
  return std::exp(-x) * std::pow(p, static_cast<double>(y - 1));
}

std::int64_t pmf_truncation_point(const ArrivalModel& arrival, const PlatoonPolicy& policy,
                                  double tail) {
  if (!(tail > 0.0 && tail < 1.0)) {
    throw std::domain_error("tail bound must be in (0, 1)");
  }
  const double p = merge_probability(arrival, policy);
  if (p == 0.0) {
    return 1;
  }
  auto y = static_cast<std::int64_t>(std::ceil(std::log(tail) / std::log(p)));
  y = std::max<std::int64_t>(y, 1);
  while (std::pow(p, static_cast<double>(y)) >= tail) {
    ++y;
  }
  return y;
}

double merge_probability(const ArrivalModel& arrival, const PlatoonPolicy& policy) {
  return -std::expm1(-checked_exponent(arrival, policy));
}

double expected_platoon_size(const ArrivalModel& arrival, const PlatoonPolicy& policy) {
  return std::exp(checked_exponent(arrival, policy));
}

double expected_platoon_headway(const ArrivalModel& arrival, const PlatoonPolicy& policy) {
  return expected_platoon_size(arrival, policy) / arrival.lambda;
}

double expected_time_reduction(const ArrivalModel& arrival, const PlatoonPolicy& policy) {
  return expm1_minus_x(checked_exponent(arrival, policy)) / arrival.lambda;
}

PlatoonStatistics platoon_statistics(const ArrivalModel& arrival, const PlatoonPolicy& policy) {
  return PlatoonStatistics{
      .merge_probability = merge_probability(arrival, policy),
      .expected_platoon_size = expected_platoon_size(arrival, policy),
      .expected_platoon_headway = expected_platoon_headway(arrival, policy),
      .expected_time_reduction = expected_time_reduction(arrival, policy),
  };
}

double exact_fuel_increase(const CostParameters& params, double t_shift) {
  validate_cost(params);
  if (!(std::isfinite(t_shift) && t_shift >= 0.0)) {
    throw ValidationError("t_shift", "t_shift must be ≥ 0");
  }
  const double nominal = params.d1 / params.v;
  if (t_shift >= nominal) {
    throw std::domain_error("infeasible catch-up: time shift " + std::to_string(t_shift) +
                            " s is not below the nominal traverse time " +
                            std::to_string(nominal) + " s");
  }
  // alpha d1 (d1 / (d1/v - t))^2 - alpha d1 v^2, factored as a difference of
  // squares so the t -> 0 limit carries no cancellation.
  const double remaining = nominal - t_shift;
  const double ratio = nominal / remaining;
  const double base = params.alpha * params.d1 * params.v * params.v;
  return base * (t_shift / remaining) * (ratio + 1.0);
}

double expected_fuel_increase_linearized(const CostParameters& params, const ArrivalModel& arrival,
                                         const PlatoonPolicy& policy) {
  validate_cost(params);
  const double v3 = params.v * params.v * params.v;
  return 2.0 * params.alpha * v3 * expected_time_reduction(arrival, policy);
}

double expected_fuel_saving_cruise(const CostParameters& params, const ArrivalModel& arrival,
                                   const PlatoonPolicy& policy) {
  validate_cost(params);
  return params.eta * params.theta * params.d2 * merge_probability(arrival, policy);
}

double expected_total_cost(const CostParameters& params, const ArrivalModel& arrival,
                           const PlatoonPolicy& policy) {
  validate_cost(params);
  const double time = expected_time_reduction(arrival, policy);
  const double merge = merge_probability(arrival, policy);
  return params.time_cost_coefficient() * time - params.cruise_saving_scale() * merge;
}

double total_cost_derivative(const CostParameters& params, const ArrivalModel& arrival, double r) {
  validate_cost(params);
  const double x = checked_exponent(arrival, PlatoonPolicy{r});
  // [c (e^{2x} - e^{x}) - K lambda] / e^{x}, divided through by e^{x}.
  return params.time_cost_coefficient() * std::expm1(x) -
         params.cruise_saving_scale() * arrival.lambda * std::exp(-x);
}

OptimalThreshold optimal_threshold(const CostParameters& params, const ArrivalModel& arrival,
                                   double r_max) {
  validate_cost(params);
  require_positive_finite("r_max", r_max);
  validate_scenario(arrival, PlatoonPolicy{r_max});

  OptimalThreshold out;
  const double c = params.time_cost_coefficient();
  if (c <= 0.0) {
    out.regime = Regime::unbounded_decreasing;
    out.r_star = r_max;
  } else {
    // Root of c e^{2x} - c e^{x} - K lambda = 0 in u = e^{x}:
    // u = 1/2 + 1/2 sqrt(1 + a), a = 4 K lambda / c.
    const double a = 4.0 * params.cruise_saving_scale() * arrival.lambda / c;
    const double sqrt_minus_one = a / (std::sqrt(1.0 + a) + 1.0);
    const double r = std::log1p(0.5 * sqrt_minus_one) / arrival.lambda;
    out.regime = Regime::interior_optimum;
    out.clamped = r > r_max;
    out.r_star = out.clamped ? r_max : r;
  }
  out.cost_at_r_star = cost_at(params, arrival, out.r_star);
  return out;
}

double numeric_optimal_threshold(const CostParameters& params, const ArrivalModel& arrival,
                                 double r_max, double tol) {
  validate_cost(params);
  require_positive_finite("r_max", r_max);
  require_positive_finite("tol", tol);
  validate_scenario(arrival, PlatoonPolicy{r_max});

  constexpr int kGridIntervals = 64;
  std::array<double, kGridIntervals + 1> costs{};
  auto grid = [&](int i) {
    return i == kGridIntervals ? r_max : r_max * static_cast<double>(i) / kGridIntervals;
  };
  int best = 0;
  for (int i = 0; i <= kGridIntervals; ++i) {
    costs[i] = cost_at(params, arrival, grid(i));
    if (costs[i] < costs[best]) {
      best = i;
    }
  }
  const bool touches_zero = best <= 1;
  const bool touches_max = best >= kGridIntervals - 1;
  double lo = grid(std::max(best - 1, 0));
  double hi = grid(std::min(best + 1, kGridIntervals));

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = cost_at(params, arrival, x1);
  double f2 = cost_at(params, arrival, x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = cost_at(params, arrival, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = cost_at(params, arrival, x2);
    }
  }

  double arg = 0.5 * (lo + hi);
  double value = cost_at(params, arrival, arg);
  // Monotone cost curves put the minimizer on the boundary itself.
  if (touches_max && costs[kGridIntervals] <= value) {
    arg = r_max;
    value = costs[kGridIntervals];
  }
  if (touches_zero && costs[0] < value) {
    arg = 0.0;
  }
  return arg;
}

}  // namespace platoon::analytic
