#include "platoon/domain.hpp"

#include <cmath>

namespace platoon {
namespace {

void require_finite(const char* field, double value) {
  if (!std::isfinite(value)) {
    throw ValidationError(field, std::string(field) + " must be finite");
  }
}

void require_positive(const char* field, double value) {
  require_finite(field, value);
  if (!(value > 0.0)) {
    throw ValidationError(field, std::string(field) + " must be > 0");
  }
}

void require_non_negative(const char* field, double value) {
  require_finite(field, value);
  if (!(value >= 0.0)) {
    throw ValidationError(field, std::string(field) + " must be ≥ 0");
  }
}

void require_open_unit(const char* field, double value) {
  require_finite(field, value);
  if (!(value > 0.0 && value < 1.0)) {
    throw ValidationError(field, std::string(field) + " must be in (0, 1)");
  }
}

}  // namespace

void validate_scenario(const ArrivalModel& arrival, const PlatoonPolicy& policy) {
  require_positive("lambda", arrival.lambda);
  require_non_negative("threshold_r", policy.threshold_r);
}

void validate_cost(const CostParameters& p) {
  require_non_negative("w1", p.w1);
  require_non_negative("w2", p.w2);
  require_non_negative("alpha", p.alpha);
  require_non_negative("theta", p.theta);
  require_open_unit("eta", p.eta);
  require_positive("v", p.v);
  require_positive("d1", p.d1);
  require_non_negative("d2", p.d2);
  require_non_negative("t0", p.t0);
}

CostParameters normalize_units(const RawCostConfig& raw) {
  require_positive("lambda", raw.lambda);
  require_non_negative("w1_per_hour", raw.w1_per_hour);
  require_non_negative("w2_per_liter", raw.w2_per_liter);
  require_non_negative("alpha", raw.alpha);
  require_non_negative("theta_l_per_100km", raw.theta_l_per_100km);
  require_open_unit("eta", raw.eta);
  require_positive("v_mph", raw.v_mph);
  require_positive("d1_km", raw.d1_km);
  require_non_negative("d2_km", raw.d2_km);
  require_non_negative("t0_s", raw.t0_s);

  CostParameters p;
  p.w1 = raw.w1_per_hour / units::kSecondsPerHour;
  p.w2 = raw.w2_per_liter;
  p.alpha = raw.alpha;
  p.theta = raw.theta_l_per_100km / units::kMetersPer100Km;
  p.eta = raw.eta;
  p.v = raw.v_mph * units::kMetersPerMile / units::kSecondsPerHour;
  p.d1 = raw.d1_km * units::kMetersPerKm;
  p.d2 = raw.d2_km * units::kMetersPerKm;
  p.t0 = raw.t0_s;
  validate_cost(p);
  return p;
}

RawCostConfig to_raw_units(const CostParameters& p, double lambda) {
  RawCostConfig raw;
  raw.lambda = lambda;
  raw.w1_per_hour = p.w1 * units::kSecondsPerHour;
  raw.w2_per_liter = p.w2;
  raw.alpha = p.alpha;
  raw.theta_l_per_100km = p.theta * units::kMetersPer100Km;
  raw.eta = p.eta;
  raw.v_mph = p.v * units::kSecondsPerHour / units::kMetersPerMile;
  raw.d1_km = p.d1 / units::kMetersPerKm;
  raw.d2_km = p.d2 / units::kMetersPerKm;
  raw.t0_s = p.t0;
  return raw;
}

}  // namespace platoon
