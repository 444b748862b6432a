#include "platoon/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace platoon::cli {
namespace {

using nlohmann::json;

std::string join(const std::string& section, const std::string& key) { return section + "." + key; }

const json& require_section(const json& doc, const char* name) {
  if (!doc.contains(name)) {
    throw ConfigError(name, "section missing");
  }
  const json& section = doc.at(name);
  if (!section.is_object()) {
    throw ConfigError(name, "expected an object");
  }
  return section;
}

double number_at(const json& section, const std::string& path, const char* key) {
  if (!section.contains(key)) {
    throw ConfigError(join(path, key), "missing");
  }
  const json& value = section.at(key);
  if (!value.is_number()) {
    throw ConfigError(join(path, key), "expected a number, got " + value.dump());
  }
  const double out = value.get<double>();
  if (!std::isfinite(out)) {
    throw ConfigError(join(path, key), "must be finite");
  }
  return out;
}

double number_or(const json& section, const std::string& path, const char* key, double fallback) {
  return section.contains(key) ? number_at(section, path, key) : fallback;
}

std::uint64_t count_at(const json& section, const std::string& path, const char* key) {
  if (!section.contains(key)) {
    throw ConfigError(join(path, key), "missing");
  }
  const json& value = section.at(key);
  if (value.is_number_unsigned()) {
    return value.get<std::uint64_t>();
  }
  // Accept integral floats such as 1e6.
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (d >= 0.0 && d < 18446744073709551616.0 && std::floor(d) == d) {
      return static_cast<std::uint64_t>(d);
    }
  }
  throw ConfigError(join(path, key), "expected a non-negative integer, got " + value.dump());
}

std::uint64_t count_or(const json& section, const std::string& path, const char* key,
                       std::uint64_t fallback) {
  return section.contains(key) ? count_at(section, path, key) : fallback;
}

std::optional<std::string> path_or_null(const json& section, const std::string& path, const char* key) {
  if (!section.contains(key) || section.at(key).is_null()) {
    return std::nullopt;
  }
  if (!section.at(key).is_string()) {
    throw ConfigError(join(path, key), "expected a string or null");
  }
  return section.at(key).get<std::string>();
}

// Re-raises a domain validation failure under the section's dotted path.
template <typename Fn>
auto within(const std::string& section, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ConfigError(join(section, e.field()), e.what());
  }
}

}  // namespace

const CostParameters& ScenarioConfig::require_cost() const {
  if (!cost) {
    throw ConfigError("cost", "section missing");
  }
  return *cost;
}

const sim::SimulationConfig& ScenarioConfig::require_simulation() const {
  if (!simulation) {
    throw ConfigError("simulation", "section missing");
  }
  return *simulation;
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("<root>", "expected a JSON object");
  }
  ScenarioConfig cfg;
  const json& arrival = require_section(doc, "arrival");
  const json& policy = require_section(doc, "policy");
  cfg.arrival.lambda = number_at(arrival, "arrival", "lambda");
  cfg.policy.threshold_r = number_at(policy, "policy", "threshold_r");
  try {
    validate_scenario(cfg.arrival, cfg.policy);
  } catch (const ValidationError& e) {
    const char* section = e.field() == "lambda" ? "arrival" : "policy";
    throw ConfigError(join(section, e.field()), e.what());
  }

  if (doc.contains("cost")) {
    const json& cost = require_section(doc, "cost");
    RawCostConfig raw;
    raw.lambda = cfg.arrival.lambda;
    raw.w1_per_hour = number_at(cost, "cost", "w1_per_hour");
    raw.w2_per_liter = number_at(cost, "cost", "w2_per_liter");
    raw.alpha = number_at(cost, "cost", "alpha");
    raw.theta_l_per_100km = number_at(cost, "cost", "theta_l_per_100km");
    raw.eta = number_at(cost, "cost", "eta");
    raw.v_mph = number_at(cost, "cost", "v_mph");
    raw.d1_km = number_at(cost, "cost", "d1_km");
    raw.d2_km = number_at(cost, "cost", "d2_km");
    raw.t0_s = number_or(cost, "cost", "t0_s", 0.0);
    cfg.cost = within("cost", [&] { return normalize_units(raw); });
    cfg.raw_cost = raw;
  }

  if (doc.contains("simulation")) {
    const json& s = require_section(doc, "simulation");
    sim::SimulationConfig sc;
    sc.arrival = cfg.arrival;
    sc.policy = cfg.policy;
    sc.n_vehicles = count_at(s, "simulation", "n_vehicles");
    sc.n_replications = count_or(s, "simulation", "n_replications", 1);
    sc.seed = count_at(s, "simulation", "seed");
    sc.warmup_vehicles = count_or(s, "simulation", "warmup_vehicles", 0);
    sc.pmf_cutoff = count_or(s, "simulation", "pmf_cutoff", 10);
    const auto threads = count_or(s, "simulation", "threads", 0);
    if (threads > std::numeric_limits<unsigned>::max()) {
      throw ConfigError("simulation.threads", "too large");
    }
    sc.threads = static_cast<unsigned>(threads);
    within("simulation", [&] {
      sim::validate(sc);
      return 0;
    });
    cfg.simulation = sc;
  }

  if (doc.contains("output")) {
    const json& out = require_section(doc, "output");
    cfg.output.sigma = number_or(out, "output", "sigma", 3.0);
    if (!(cfg.output.sigma > 0.0)) {
      throw ConfigError("output.sigma", "must be > 0");
    }
    cfg.output.csv = path_or_null(out, "output", "csv");
    cfg.output.json = path_or_null(out, "output", "json");
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("<file>", "cannot open " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace platoon::cli
