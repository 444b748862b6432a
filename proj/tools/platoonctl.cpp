#include <iostream>

#include "CLI11.hpp"
#include "platoon/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace platoon::cli;

  CLI::App app{"Threshold platooning: closed-form statistics, cost optimization, Monte Carlo checks"};
  app.require_subcommand(1);

  AnalyticOptions analytic_opts;
  auto* analytic = app.add_subcommand("analytic", "Closed-form statistics and cost terms");
  analytic->add_option("--config", analytic_opts.config_path, "Scenario JSON")->required();
  analytic->add_option("--json", analytic_opts.json_path, "Write results as JSON");

  SimulateOptions simulate_opts;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison against closed forms");
  simulate->add_option("--config", simulate_opts.config_path, "Scenario JSON")->required();
  simulate->add_option("--csv", simulate_opts.csv_path, "Write the comparison report as CSV");
  simulate->add_option("--sigma", simulate_opts.sigma, "Pass band in CI half-widths (default 3)");

  SweepOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Tabulate statistics and cost over a grid of r");
  sweep->add_option("--config", sweep_opts.config_path, "Scenario JSON")->required();
  sweep->add_option("--r-min", sweep_opts.spec.r_min, "First threshold, s")->required();
  sweep->add_option("--r-max", sweep_opts.spec.r_max, "Last threshold, s")->required();
  sweep->add_option("--points", sweep_opts.spec.n_points, "Grid points (>= 2)")->required();
  sweep->add_flag("--with-simulation", sweep_opts.with_simulation, "Append simulated columns");
  sweep->add_option("--csv", sweep_opts.csv_path, "Output CSV")->required();

  OptimizeOptions optimize_opts;
  auto* optimize = app.add_subcommand("optimize", "Cost-minimizing threshold");
  optimize->add_option("--config", optimize_opts.config_path, "Scenario JSON")->required();
  optimize->add_option("--r-max", optimize_opts.r_max, "Upper bound on r, s")->required();
  optimize->add_option("--tol", optimize_opts.tol, "Golden-section bracket width, s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analytic) return cmd_analytic(analytic_opts, std::cout);
    if (*simulate) return cmd_simulate(simulate_opts, std::cout);
    if (*sweep) return cmd_sweep(sweep_opts, std::cout);
    if (*optimize) return cmd_optimize(optimize_opts, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const platoon::ValidationError& e) {
    std::cerr << "error: " << e.field() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const platoon::RangeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
