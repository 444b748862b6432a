#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace platoon {

/// Thrown when an input value violates its constraint. `field()` names the
/// offending quantity as it appears in configuration files.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Thrown when lambda * r is too large for the closed forms to be meaningful.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Poisson arrival process at the highway entrance.
struct ArrivalModel {
  double lambda = 0.0;  // vehicles per second
};

/// Headway-threshold merge rule. A vehicle joins the platoon ahead when its
/// headway is <= threshold_r (ties merge).
struct PlatoonPolicy {
  double threshold_r = 0.0;  // seconds

  bool merges(double headway) const noexcept { return headway <= threshold_r; }
};

/// Cost model parameters in SI-normalized units.
struct CostParameters {
  double w1 = 0.0;     // value of time, currency per second
  double w2 = 0.0;     // fuel price, currency per liter
  double alpha = 0.0;  // drag-fuel coefficient, L s^2 / m^3
  double theta = 0.0;  // fuel efficiency, liters per meter
  double eta = 0.0;    // platoon fuel-saving fraction, (0, 1)
  double v = 0.0;      // cruise speed, m/s
  double d1 = 0.0;     // merging-zone length, m
  double d2 = 0.0;     // cruising-zone length, m
  double t0 = 0.0;     // nominal merging-zone traverse time, s (reporting only)

  /// 2 alpha w2 v^3 - w1: marginal cost per second of catch-up time.
  double time_cost_coefficient() const noexcept { return 2.0 * alpha * w2 * v * v * v - w1; }

  /// w2 eta theta d2: the currency value of full drafting over the cruise zone.
  double cruise_saving_scale() const noexcept { return w2 * eta * theta * d2; }
};

/// Cost inputs in the customary mixed units used for highway freight studies.
struct RawCostConfig {
  double lambda = 0.0;              // vehicles per second
  double w1_per_hour = 0.0;         // currency per hour
  double w2_per_liter = 0.0;        // currency per liter
  double alpha = 0.0;               // L s^2 / m^3
  double theta_l_per_100km = 0.0;   // liters per 100 km
  double eta = 0.0;
  double v_mph = 0.0;               // miles per hour
  double d1_km = 0.0;
  double d2_km = 0.0;
  double t0_s = 0.0;
};

namespace units {
inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kMetersPerMile = 1609.344;
inline constexpr double kMetersPerKm = 1000.0;
inline constexpr double kMetersPer100Km = 100000.0;
}  // namespace units

/// Converts mixed-unit inputs to SI. Throws ValidationError naming the field.
CostParameters normalize_units(const RawCostConfig& raw);

/// Inverse of normalize_units; `lambda` is carried through unchanged.
RawCostConfig to_raw_units(const CostParameters& params, double lambda);

void validate_scenario(const ArrivalModel& arrival, const PlatoonPolicy& policy);
void validate_cost(const CostParameters& params);

}  // namespace platoon
