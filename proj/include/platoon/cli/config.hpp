#pragma once

// Scenario files: one JSON document with sections
//
//   arrival    { "lambda": veh/s }
//   policy     { "threshold_r": s }
//   cost       { "w1_per_hour", "w2_per_liter", "alpha", "theta_l_per_100km",
//                "eta", "v_mph", "d1_km", "d2_km", "t0_s" (optional, default 0) }
//   simulation { "n_vehicles", "n_replications", "seed",
//                "warmup_vehicles" (0), "pmf_cutoff" (10), "threads" (0) }
//   output     { "sigma" (3), "csv" (null), "json" (null) }
//
// arrival and policy are required. cost and simulation are required only by
// the commands that use them.

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "platoon/domain.hpp"
#include "platoon/simulator.hpp"

namespace platoon::cli {

/// Configuration problem; `field()` is the dotted path, e.g. "arrival.lambda".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct OutputOptions {
  double sigma = 3.0;
  std::optional<std::string> csv;
  std::optional<std::string> json;
};

struct ScenarioConfig {
  ArrivalModel arrival;
  PlatoonPolicy policy;
  std::optional<RawCostConfig> raw_cost;
  std::optional<CostParameters> cost;
  std::optional<sim::SimulationConfig> simulation;
  OutputOptions output;

  const CostParameters& require_cost() const;
  const sim::SimulationConfig& require_simulation() const;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

}  // namespace platoon::cli
