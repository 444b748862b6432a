#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "platoon/analytic.hpp"
#include "platoon/cli/commands.hpp"
#include "platoon/cli/config.hpp"
#include "platoon/cli/csv.hpp"

using namespace platoon;
using namespace platoon::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_doc() {
  return json::parse(R"({
    "arrival": {"lambda": 0.02},
    "policy": {"threshold_r": 50},
    "cost": {"w1_per_hour": 25.8, "w2_per_liter": 0.868, "alpha": 6.78e-7,
             "theta_l_per_100km": 41, "eta": 0.1, "v_mph": 55,
             "d1_km": 10, "d2_km": 30},
    "simulation": {"n_vehicles": 20000, "n_replications": 2, "seed": 11}
  })");
}

std::string error_field(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("platoon_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string write(const std::string& name, const json& doc) const {
    const auto p = (path / name).string();
    std::ofstream(p) << doc.dump();
    return p;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(base_doc());
  CHECK(cfg.arrival.lambda == 0.02);
  CHECK(cfg.policy.threshold_r == 50.0);
  REQUIRE(cfg.cost);
  CHECK(cfg.cost->d1 == 10000.0);
  CHECK(cfg.cost->t0 == 0.0);
  REQUIRE(cfg.simulation);
  CHECK(cfg.simulation->n_vehicles == 20000);
  CHECK(cfg.simulation->pmf_cutoff == 10);
  CHECK(cfg.simulation->warmup_vehicles == 0);
  CHECK(cfg.output.sigma == 3.0);
  CHECK_FALSE(cfg.output.csv);

  auto doc = base_doc();
  doc.erase("cost");
  doc.erase("simulation");
  const auto minimal = parse_config(doc);
  CHECK_THROWS_AS(minimal.require_cost(), ConfigError);
  CHECK_THROWS_AS(minimal.require_simulation(), ConfigError);

  // Integral floats are accepted as counts.
  doc = base_doc();
  doc["simulation"]["n_vehicles"] = 1000.0;
  CHECK(parse_config(doc).simulation->n_vehicles == 1000);
}

TEST_CASE("config errors name the field") {
  auto doc = base_doc();
  doc["arrival"]["lambda"] = 0;
  CHECK(error_field(doc) == "arrival.lambda");

  doc = base_doc();
  doc["policy"]["threshold_r"] = -1;
  CHECK(error_field(doc) == "policy.threshold_r");

  doc = base_doc();
  doc["policy"].erase("threshold_r");
  CHECK(error_field(doc) == "policy.threshold_r");

  doc = base_doc();
  doc.erase("arrival");
  CHECK(error_field(doc) == "arrival");

  doc = base_doc();
  doc["cost"]["eta"] = "high";
  CHECK(error_field(doc) == "cost.eta");
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("expected a number") != std::string::npos);
  }

  doc = base_doc();
  doc["cost"]["v_mph"] = -3;
  CHECK(error_field(doc) == "cost.v_mph");

  doc = base_doc();
  doc["simulation"]["n_vehicles"] = 1;
  CHECK(error_field(doc) == "simulation.n_vehicles");

  doc = base_doc();
  doc["simulation"]["n_vehicles"] = 2.5;
  CHECK(error_field(doc) == "simulation.n_vehicles");

  doc = base_doc();
  doc["simulation"]["warmup_vehicles"] = 20000;
  CHECK(error_field(doc) == "simulation.warmup_vehicles");

  doc = base_doc();
  doc["output"] = {{"sigma", 0}};
  CHECK(error_field(doc) == "output.sigma");

  CHECK(error_field(json::array()) == "<root>");
  CHECK_THROWS_AS(load_config("/nonexistent/platoon.json"), ConfigError);

  TempDir dir;
  const auto bad = (dir.path / "bad.json").string();
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(load_config(bad), ConfigError);
}

TEST_CASE("format_double round-trips") {
  for (const double x : {0.0, 1.0, 0.1, -0.30395506199840294, 1e-300, 6.02214076e23}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("analytic command") {
  TempDir dir;
  auto doc = base_doc();
  const auto cfg_path = dir.write("s.json", doc);
  const auto json_path = (dir.path / "a.json").string();
  std::ostringstream out;
  CHECK(cmd_analytic({cfg_path, json_path}, out) == kExitOk);

  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 8);
  CHECK(lines[1].rfind("merge_probability", 0) == 0);
  CHECK(lines[7].rfind("expected_total_cost", 0) == 0);

  const auto written = json::parse(slurp(json_path));
  const auto cfg = parse_config(doc);
  CHECK(written["expected_total_cost"].get<double>() ==
        analytic::expected_total_cost(*cfg.cost, cfg.arrival, cfg.policy));
  CHECK(written["expected_platoon_size"].get<double>() == doctest::Approx(std::exp(1.0)));

  doc["policy"]["threshold_r"] = 0;
  const auto zero = evaluate(*parse_config(doc).cost, {0.02}, {0.0});
  CHECK(zero.merge_probability == 0.0);
  CHECK(zero.expected_platoon_size == 1.0);
  CHECK(zero.expected_time_reduction == 0.0);
  CHECK(zero.expected_fuel_increase == 0.0);
  CHECK(zero.expected_fuel_saving == 0.0);
  CHECK(zero.expected_total_cost == 0.0);
}

TEST_CASE("simulate command") {
  TempDir dir;
  const auto cfg_path = dir.write("s.json", base_doc());
  const auto csv_a = (dir.path / "a.csv").string();
  const auto csv_b = (dir.path / "b.csv").string();
  std::ostringstream out;
  CHECK(cmd_simulate({cfg_path, csv_a, std::nullopt}, out) == kExitOk);
  CHECK(cmd_simulate({cfg_path, csv_b, std::nullopt}, out) == kExitOk);
  const auto a = slurp(csv_a);
  CHECK(!a.empty());
  CHECK(a == slurp(csv_b));

  const auto lines = lines_of(a);
  REQUIRE(lines.size() == 1 + 4 + 10);
  CHECK(lines[0] == "statistic,analytic,empirical,ci_half_width,relative_error,samples,pass");
  CHECK(split(lines[1])[0] == "merge_probability");
  CHECK(split(lines[5])[0] == "size_pmf_1");
  CHECK(split(lines[14])[0] == "size_pmf_10");

  // A tiny sigma makes the comparison fail with exit code 1.
  std::ostringstream quiet;
  CHECK(cmd_simulate({cfg_path, std::nullopt, 1e-9}, quiet) == kExitComparisonFailed);
  CHECK_THROWS_AS(cmd_simulate({cfg_path, std::nullopt, -1.0}, quiet), ConfigError);

  auto doc = base_doc();
  doc["simulation"]["n_vehicles"] = 1;
  const auto bad = dir.write("bad.json", doc);
  CHECK_THROWS_AS(cmd_simulate({bad, std::nullopt, std::nullopt}, quiet), ConfigError);
}

TEST_CASE("comparison rows") {
  const auto summary = sim::run_replications([] {
    sim::SimulationConfig c;
    c.arrival = {0.02};
    c.policy = {50.0};
    c.n_vehicles = 200000;
    c.seed = 4;
    return c;
  }()).aggregate;
  const auto report = compare({0.02}, {50.0}, summary, 3.0);
  CHECK(report.rows.size() == 14);
  CHECK(report.all_pass());
  for (const auto& row : report.rows) {
    CHECK(row.half_width > 0.0);
    CHECK(row.relative_error == doctest::Approx(relative_error(row.empirical, row.analytic)));
  }
  CHECK(relative_error(0.0, 0.0) == 0.0);
  CHECK(relative_error(1.0, 0.0) == 1.0 / kRelativeErrorFloor);
}

TEST_CASE("sweep grid") {
  CHECK(sweep_grid({0.0, 100.0, 2}) == std::vector<double>{0.0, 100.0});
  const auto g = sweep_grid({0.0, 200.0, 201});
  CHECK(g.size() == 201);
  CHECK(g.back() == 200.0);
  CHECK(g[50] == doctest::Approx(50.0));
  CHECK_THROWS(validate(SweepSpec{0.0, 100.0, 1}));
  CHECK_THROWS(validate(SweepSpec{10.0, 5.0, 3}));
  CHECK_THROWS(validate(SweepSpec{-1.0, 5.0, 3}));
}

TEST_CASE("sweep command") {
  TempDir dir;
  const auto cfg_path = dir.write("s.json", base_doc());
  const auto csv = (dir.path / "sweep.csv").string();
  std::ostringstream out;
  CHECK(cmd_sweep({cfg_path, {0.0, 100.0, 2}, false, csv}, out) == kExitOk);
  auto lines = lines_of(slurp(csv));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "r,expected_platoon_size,expected_platoon_headway,expected_time_reduction,"
        "expected_fuel_increase,expected_fuel_saving,expected_total_cost");
  CHECK(split(lines[1])[0] == "0");
  CHECK(split(lines[2])[0] == "100");

  CHECK(cmd_sweep({cfg_path, {0.0, 100.0, 3}, true, csv}, out) == kExitOk);
  lines = lines_of(slurp(csv));
  REQUIRE(lines.size() == 4);
  CHECK(split(lines[0]).size() == 12);
  CHECK(split(lines[0]).back() == "sim_total_cost");

  // Minimum of the 1 s grid lies within one step of the optimizer's answer.
  auto cfg = parse_config(base_doc());
  const auto rows = sweep(cfg, {0.0, 200.0, 201}, false);
  const auto best = std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.analytic.expected_total_cost < b.analytic.expected_total_cost;
  });
  const auto opt = analytic::optimal_threshold(*cfg.cost, cfg.arrival, 200.0);
  CHECK(std::abs(best->r - opt.r_star) <= 1.0);

  // Longer platooned stretch, deeper minimum.
  auto min_cost = [&](double d2_km) {
    auto doc = base_doc();
    doc["cost"]["d2_km"] = d2_km;
    const auto c = parse_config(doc);
    double m = 0.0;
    for (const auto& row : sweep(c, {0.0, 200.0, 201}, false)) {
      m = std::min(m, row.analytic.expected_total_cost);
    }
    return m;
  };
  CHECK(min_cost(80.0) < min_cost(5.0));
}

TEST_CASE("optimize command") {
  TempDir dir;
  const auto cfg_path = dir.write("s.json", base_doc());
  std::ostringstream out;
  CHECK(cmd_optimize({cfg_path, 200.0, 1e-3}, out) == kExitOk);
  const auto text = out.str();
  CHECK(text.find("interior_optimum") != std::string::npos);
  CHECK(text.find("r_star_numeric") != std::string::npos);
  CHECK(text.find("clamped           false") != std::string::npos);

  auto doc = base_doc();
  doc["cost"]["d2_km"] = 0;
  std::ostringstream zero_out;
  CHECK(cmd_optimize({dir.write("d2.json", doc), 200.0, 1e-3}, zero_out) == kExitOk);
  CHECK(zero_out.str().find("r_star            0\n") != std::string::npos);

  // Time savings outweigh the catch-up fuel: cost keeps falling.
  doc = base_doc();
  doc["cost"]["w1_per_hour"] = 100.0;
  std::ostringstream down;
  CHECK(cmd_optimize({dir.write("w1.json", doc), 200.0, 1e-3}, down) == kExitOk);
  CHECK(down.str().find("unbounded_decreasing") != std::string::npos);

  CHECK_THROWS_AS(cmd_optimize({cfg_path, 0.0, 1e-3}, out), ConfigError);
  CHECK_THROWS_AS(cmd_optimize({cfg_path, 100.0, -1.0}, out), ConfigError);
}
