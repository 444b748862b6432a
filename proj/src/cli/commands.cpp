#include "platoon/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "platoon/cli/csv.hpp"

namespace platoon::cli {
namespace {

using nlohmann::json;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("<output>", "cannot write " + path);
  }
  return out;
}

ComparisonRow mean_row(std::string name, double analytic, const sim::Estimate& e, double sigma) {
  ComparisonRow row;
  row.statistic = std::move(name);
  row.analytic = analytic;
  row.empirical = e.mean;
  row.half_width = e.half_width;
  row.relative_error = relative_error(e.mean, analytic);
  row.samples = e.samples;
  row.pass = e.samples >= 2 && std::isfinite(e.half_width) &&
             std::abs(e.mean - analytic) <= sigma * e.half_width;
  return row;
}

ComparisonRow proportion_row(std::string name, double analytic, const sim::Estimate& e,
                             double sigma) {
  ComparisonRow row;
  row.statistic = std::move(name);
  row.analytic = analytic;
  row.empirical = e.mean;
  row.samples = e.samples;
  row.relative_error = relative_error(e.mean, analytic);
  if (e.samples == 0) {
    row.half_width = std::numeric_limits<double>::quiet_NaN();
    row.pass = false;
    return row;
  }
  row.half_width =
      sim::kZ95 * std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(e.samples));
  row.pass = std::abs(e.mean - analytic) <= sigma * row.half_width;
  return row;
}

void print_comparison(std::ostream& out, const ComparisonReport& report) {
  out << std::left << std::setw(22) << "statistic" << std::right << std::setw(14) << "analytic"
      << std::setw(14) << "empirical" << std::setw(13) << "ci_half" << std::setw(12) << "rel_err"
      << std::setw(10) << "samples" << "  result\n";
  for (const auto& row : report.rows) {
    out << std::left << std::setw(22) << row.statistic << std::right << std::setprecision(6)
        << std::setw(14) << row.analytic << std::setw(14) << row.empirical << std::setw(13)
        << row.half_width << std::setw(12) << row.relative_error << std::setw(10) << row.samples
        << "  " << (row.pass ? "pass" : "FAIL") << '\n';
  }
  out << (report.all_pass() ? "all statistics within " : "some statistics outside ")
      << report.sigma << " half-widths\n";
}

json comparison_json(const ComparisonReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"statistic", row.statistic},
                    {"analytic", row.analytic},
                    {"empirical", row.empirical},
                    {"ci_half_width", row.half_width},
                    {"relative_error", row.relative_error},
                    {"samples", row.samples},
                    {"pass", row.pass}});
  }
  return {{"sigma", report.sigma}, {"all_pass", report.all_pass()}, {"rows", rows}};
}

}  // namespace

double relative_error(double empirical, double analytic) noexcept {
  return std::abs(empirical - analytic) / std::max(std::abs(analytic), kRelativeErrorFloor);
}

bool ComparisonReport::all_pass() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.pass; });
}

ComparisonReport compare(const ArrivalModel& arrival, const PlatoonPolicy& policy,
                         const sim::EmpiricalSummary& summary, double sigma) {
  ComparisonReport report;
  report.sigma = sigma;
  const auto stats = analytic::platoon_statistics(arrival, policy);
  report.rows.push_back(
      proportion_row("merge_probability", stats.merge_probability, summary.merge_fraction(), sigma));
  report.rows.push_back(
      mean_row("platoon_size", stats.expected_platoon_size, summary.mean_platoon_size(), sigma));
  report.rows.push_back(mean_row("platoon_headway", stats.expected_platoon_headway,
                                 summary.mean_leader_headway(), sigma));
  report.rows.push_back(mean_row("time_reduction", stats.expected_time_reduction,
                                 summary.mean_time_shift(), sigma));
  for (std::size_t y = 1; y <= summary.size_counts.size(); ++y) {
    const double p = analytic::platoon_size_pmf(arrival, policy, static_cast<std::int64_t>(y));
    report.rows.push_back(
        proportion_row("size_pmf_" + std::to_string(y), p, summary.size_frequency(y), sigma));
  }
  return report;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  CsvWriter csv(out);
  csv.write_row({"statistic", "analytic", "empirical", "ci_half_width", "relative_error", "samples",
                 "pass"});
  for (const auto& row : report.rows) {
    csv.write_row({row.statistic, format_double(row.analytic), format_double(row.empirical),
                   format_double(row.half_width), format_double(row.relative_error),
                   std::to_string(row.samples), row.pass ? "1" : "0"});
  }
}

AnalyticRow evaluate(const CostParameters& params, const ArrivalModel& arrival,
                     const PlatoonPolicy& policy) {
  const auto stats = analytic::platoon_statistics(arrival, policy);
  AnalyticRow row;
  row.merge_probability = stats.merge_probability;
  row.expected_platoon_size = stats.expected_platoon_size;
  row.expected_platoon_headway = stats.expected_platoon_headway;
  row.expected_time_reduction = stats.expected_time_reduction;
  row.expected_fuel_increase = analytic::expected_fuel_increase_linearized(params, arrival, policy);
  row.expected_fuel_saving = analytic::expected_fuel_saving_cruise(params, arrival, policy);
  row.expected_total_cost = analytic::expected_total_cost(params, arrival, policy);
  return row;
}

void validate(const SweepSpec& spec) {
  if (!(std::isfinite(spec.r_min) && spec.r_min >= 0.0)) {
    throw ConfigError("--r-min", "must be ≥ 0");
  }
  if (!(std::isfinite(spec.r_max) && spec.r_max > spec.r_min)) {
    throw ConfigError("--r-max", "must be > r_min");
  }
  if (spec.n_points < 2) {
    throw ConfigError("--points", "must be ≥ 2");
  }
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  validate(spec);
  std::vector<double> grid(spec.n_points);
  const double step = (spec.r_max - spec.r_min) / static_cast<double>(spec.n_points - 1);
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    grid[i] = spec.r_min + step * static_cast<double>(i);
  }
  grid.back() = spec.r_max;
  return grid;
}

std::vector<SweepRow> sweep(const ScenarioConfig& config, const SweepSpec& spec,
                            bool with_simulation) {
  const auto& params = config.require_cost();
  const auto* sim_base = with_simulation ? &config.require_simulation() : nullptr;
  std::vector<SweepRow> rows;
  for (const double r : sweep_grid(spec)) {
    SweepRow row;
    row.r = r;
    const PlatoonPolicy policy{r};
    row.analytic = evaluate(params, config.arrival, policy);
    if (sim_base != nullptr) {
      // Same seed at every grid point: common random numbers across r.
      auto sc = *sim_base;
      sc.policy = policy;
      row.simulated = sim::run_replications(sc).aggregate;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const CostParameters& params,
                     const std::vector<SweepRow>& rows) {
  const bool with_sim = !rows.empty() && rows.front().simulated.has_value();
  CsvWriter csv(out);
  std::vector<std::string> header{"r",
                                  "expected_platoon_size",
                                  "expected_platoon_headway",
                                  "expected_time_reduction",
                                  "expected_fuel_increase",
                                  "expected_fuel_saving",
                                  "expected_total_cost"};
  if (with_sim) {
    header.insert(header.end(), {"sim_merge_fraction", "sim_platoon_size", "sim_platoon_headway",
                                 "sim_time_reduction", "sim_total_cost"});
  }
  csv.write_row(header);
  for (const auto& row : rows) {
    const auto& a = row.analytic;
    std::vector<std::string> fields{format_double(row.r),
                                    format_double(a.expected_platoon_size),
                                    format_double(a.expected_platoon_headway),
                                    format_double(a.expected_time_reduction),
                                    format_double(a.expected_fuel_increase),
                                    format_double(a.expected_fuel_saving),
                                    format_double(a.expected_total_cost)};
    if (with_sim) {
      const auto& s = *row.simulated;
      const double merge = s.merge_fraction().mean;
      const double shift = s.mean_time_shift().mean;
      const double cost =
          params.time_cost_coefficient() * shift - params.cruise_saving_scale() * merge;
      fields.insert(fields.end(),
                    {format_double(merge), format_double(s.mean_platoon_size().mean),
                     format_double(s.mean_leader_headway().mean), format_double(shift),
                     format_double(cost)});
    }
    csv.write_row(fields);
  }
}

int cmd_analytic(const AnalyticOptions& options, std::ostream& out) {
  const auto config = load_config(options.config_path);
  const auto row = evaluate(config.require_cost(), config.arrival, config.policy);

  const std::pair<const char*, double> items[] = {
      {"merge_probability", row.merge_probability},
      {"expected_platoon_size", row.expected_platoon_size},
      {"expected_platoon_headway", row.expected_platoon_headway},
      {"expected_time_reduction", row.expected_time_reduction},
      {"expected_fuel_increase", row.expected_fuel_increase},
      {"expected_fuel_saving", row.expected_fuel_saving},
      {"expected_total_cost", row.expected_total_cost},
  };
  out << "lambda = " << format_double(config.arrival.lambda)
      << " veh/s, threshold_r = " << format_double(config.policy.threshold_r) << " s\n";
  json doc = {{"lambda", config.arrival.lambda}, {"threshold_r", config.policy.threshold_r}};
  for (const auto& [name, value] : items) {
    out << std::left << std::setw(26) << name << format_double(value) << '\n';
    doc[name] = value;
  }

  const auto json_path = options.json_path ? options.json_path : config.output.json;
  if (json_path) {
    auto file = open_output(*json_path);
    file << doc.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out) {
  const auto config = load_config(options.config_path);
  const auto& sc = config.require_simulation();
  const double sigma = options.sigma.value_or(config.output.sigma);
  if (!(std::isfinite(sigma) && sigma > 0.0)) {
    throw ConfigError("--sigma", "must be > 0");
  }

  const auto result = sim::run_replications(sc);
  const auto report = compare(config.arrival, config.policy, result.aggregate, sigma);

  out << "lambda = " << format_double(config.arrival.lambda)
      << " veh/s, threshold_r = " << format_double(config.policy.threshold_r) << " s, "
      << sc.n_replications << " x " << sc.n_vehicles << " vehicles, seed " << sc.seed << '\n';
  print_comparison(out, report);

  const auto csv_path = options.csv_path ? options.csv_path : config.output.csv;
  if (csv_path) {
    auto file = open_output(*csv_path);
    write_comparison_csv(file, report);
  }
  if (config.output.json) {
    auto file = open_output(*config.output.json);
    file << comparison_json(report).dump(2) << '\n';
  }
  return report.all_pass() ? kExitOk : kExitComparisonFailed;
}

int cmd_sweep(const SweepOptions& options, std::ostream& out) {
  const auto config = load_config(options.config_path);
  const auto rows = sweep(config, options.spec, options.with_simulation);
  {
    auto file = open_output(options.csv_path);
    write_sweep_csv(file, config.require_cost(), rows);
  }
  const auto best = std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.analytic.expected_total_cost < b.analytic.expected_total_cost;
  });
  out << "wrote " << rows.size() << " rows to " << options.csv_path << '\n'
      << "minimum expected_total_cost " << format_double(best->analytic.expected_total_cost)
      << " at r = " << format_double(best->r) << " s\n";
  return kExitOk;
}

int cmd_optimize(const OptimizeOptions& options, std::ostream& out) {
  const auto config = load_config(options.config_path);
  const auto& params = config.require_cost();
  if (!(std::isfinite(options.r_max) && options.r_max > 0.0)) {
    throw ConfigError("--r-max", "must be > 0");
  }
  if (!(std::isfinite(options.tol) && options.tol > 0.0)) {
    throw ConfigError("--tol", "must be > 0");
  }
  const auto closed = analytic::optimal_threshold(params, config.arrival, options.r_max);
  const double numeric =
      analytic::numeric_optimal_threshold(params, config.arrival, options.r_max, options.tol);

  auto line = [&out](const char* key, const std::string& value) {
    out << std::left << std::setw(18) << key << value << '\n';
  };
  line("regime", analytic::to_string(closed.regime));
  line("r_star", format_double(closed.r_star));
  line("r_star_numeric", format_double(numeric));
  line("clamped", closed.clamped ? "true" : "false");
  line("cost_at_r_star", format_double(closed.cost_at_r_star));
  line("delta", format_double(std::abs(closed.r_star - numeric)));
  return kExitOk;
}

}  // namespace platoon::cli
