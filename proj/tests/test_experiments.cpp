#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "logdiv/experiments.hpp"

using logdiv::ConfigError;
using logdiv::ExecPolicy;
using logdiv::ExperimentConfig;
using logdiv::RunResult;
using nlohmann::json;

namespace {

json base_config() {
  return json{{"generator_id", "ball_log(2,4,[0,0],1)"},
              {"seed", 11},
              {"samples", 20}};
}

ExperimentConfig cfg_of(const json& j) { return logdiv::parse_config(j); }

}  // namespace

TEST_CASE("config parsing accepts the full schema") {
  json j = {{"generator_id", "ball_log(2,4,[0,0],1)"},
            {"alpha", 1.0},
            {"seed", 99},
            {"samples", 10},
            {"grid", {{"t_max", 0.05}, {"steps", 10}}},
            {"fd_steps", {{"third", 1e-3}, {"fourth", 5e-3}}},
            {"tolerances", {{"equivalence", 1e-12}}},
            {"output", {{"format", "json"}, {"path", "out.json"}}},
            {"inject_fault", false}};
  const ExperimentConfig cfg = cfg_of(j);
  CHECK(cfg.seed == 99);
  CHECK(cfg.samples == 10);
  CHECK(cfg.grid.t_max.value() == 0.05);
  CHECK(cfg.tolerances.at("equivalence") == 1e-12);
  CHECK(cfg.output.format == "json");
}

TEST_CASE("config parsing fails fast") {
  json j = base_config();
  j["typo_field"] = 1;
  CHECK_THROWS_AS(cfg_of(j), ConfigError);

  j = base_config();
  j["grid"] = {{"tmax", 0.1}};
  CHECK_THROWS_AS(cfg_of(j), ConfigError);

  j = base_config();
  j["samples"] = 0;
  CHECK_THROWS_AS(cfg_of(j), ConfigError);

  j = base_config();
  j["grid"] = {{"t_max", 0.0}};
  CHECK_THROWS_AS(cfg_of(j), ConfigError);

  j = base_config();
  j["grid"] = {{"t_max", 0.25}};
  CHECK_THROWS_AS(cfg_of(j), ConfigError);

  j = base_config();
  j["alpha"] = -1.0;
  CHECK_THROWS_AS(cfg_of(j), ConfigError);

  j = base_config();
  j["tolerances"] = {{"equivalence", -1.0}};
  CHECK_THROWS_AS(cfg_of(j), ConfigError);

  j = base_config();
  j["output"] = {{"format", "xml"}};
  CHECK_THROWS_AS(cfg_of(j), ConfigError);

  CHECK_THROWS_AS(cfg_of(json{{"samples", 3}}), ConfigError);
}

TEST_CASE("generator ids") {
  ExperimentConfig cfg = cfg_of(base_config());
  CHECK(logdiv::generator_from_config(cfg).alpha_value() == 1.0);

  cfg.generator_id = "ball_log(2, 4, [0.5, -0.5])";
  cfg.alpha = 2.0;
  CHECK(logdiv::generator_from_config(cfg).alpha_value() == 2.0);

  cfg.generator_id = "quadratic(3)";
  CHECK(logdiv::generator_from_config(cfg).is_bregman());

  cfg.generator_id = "ball_log(2,4,[0,0],1)";
  cfg.alpha = 2.0;  // contradicts the id
  CHECK_THROWS_AS(logdiv::generator_from_config(cfg), ConfigError);

  cfg.alpha.reset();
  cfg.generator_id = "sphere(2)";
  CHECK_THROWS_AS(logdiv::generator_from_config(cfg), ConfigError);
  cfg.generator_id = "ball_log(2,4)";
  CHECK_THROWS_AS(logdiv::generator_from_config(cfg), ConfigError);
  cfg.generator_id = "ball_log(2,4,[0,0,0],1)";
  CHECK_THROWS_AS(logdiv::generator_from_config(cfg), ConfigError);
}

TEST_CASE("equivalence run passes and fault injection is caught") {
  ExperimentConfig cfg = cfg_of(base_config());
  const RunResult ok = logdiv::run_equivalence(cfg, ExecPolicy::serial);
  CHECK(ok.pass);
  CHECK(ok.summary["max_error"].get<double>() < 1e-12);

  cfg.inject_fault = true;
  const RunResult bad = logdiv::run_equivalence(cfg, ExecPolicy::serial);
  CHECK_FALSE(bad.pass);

  cfg.inject_fault = false;
  cfg.generator_id = "quadratic(2)";
  cfg.alpha.reset();
  CHECK_THROWS_AS(logdiv::run_equivalence(cfg, ExecPolicy::serial),
                  ConfigError);
}

TEST_CASE("serial and parallel sweeps render identical bytes") {
  ExperimentConfig cfg = cfg_of(base_config());
  cfg.samples = 64;
  for (const std::string name :
       {"equivalence", "pythagoras", "immersion-check"}) {
    ExperimentConfig c = cfg;
    if (name == "pythagoras") c.samples = 8;
    const RunResult serial = logdiv::run_command(name, c, ExecPolicy::serial);
    const RunResult parallel =
        logdiv::run_command(name, c, ExecPolicy::parallel);
    CHECK(logdiv::render_csv(serial) == logdiv::render_csv(parallel));
    CHECK(logdiv::render_json(serial, c) == logdiv::render_json(parallel, c));
  }
}

TEST_CASE("same seed reproduces bytes, a new seed changes them") {
  ExperimentConfig cfg = cfg_of(base_config());
  const std::string a =
      logdiv::render_csv(logdiv::run_equivalence(cfg, ExecPolicy::parallel));
  const std::string b =
      logdiv::render_csv(logdiv::run_equivalence(cfg, ExecPolicy::parallel));
  CHECK(a == b);
  cfg.seed = 12;
  const std::string c =
      logdiv::render_csv(logdiv::run_equivalence(cfg, ExecPolicy::parallel));
  CHECK(a != c);
}

TEST_CASE("csv cells round-trip doubles") {
  ExperimentConfig cfg = cfg_of(base_config());
  cfg.samples = 3;
  const RunResult r = logdiv::run_equivalence(cfg, ExecPolicy::serial);
  const std::string csv = logdiv::render_csv(r);
  CHECK(csv.substr(0, 5) == "index");

  // pick the l_value column of the first data row and re-parse it
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream rs(row);
  while (std::getline(rs, cell, ',')) cells.push_back(cell);
  const double parsed = std::strtod(cells[3].c_str(), nullptr);
  CHECK(parsed == r.table.rows[0][3].get<double>());
}

TEST_CASE("curvature and expansion runs on the flat generator pass") {
  ExperimentConfig cfg = cfg_of(base_config());
  cfg.generator_id = "quadratic(2)";
  cfg.samples = 5;
  const RunResult curv = logdiv::run_curvature(cfg, ExecPolicy::parallel);
  CHECK(curv.pass);
  CHECK(curv.summary["criterion_second_derivative_norm"].get<double>() ==
        0.0);
  const RunResult exp = logdiv::run_expansion(cfg, ExecPolicy::parallel);
  CHECK(exp.pass);
}

TEST_CASE("pythagoras cohorts behave as expected") {
  ExperimentConfig cfg = cfg_of(base_config());
  cfg.samples = 10;
  const RunResult r = logdiv::run_pythagoras(cfg, ExecPolicy::parallel);
  CHECK(r.pass);
  CHECK(r.summary["max_error"].get<double>() < 1e-8);
}

TEST_CASE("json document shape") {
  ExperimentConfig cfg = cfg_of(base_config());
  cfg.samples = 2;
  const RunResult r = logdiv::run_immersion_check(cfg, ExecPolicy::serial);
  const json doc = json::parse(logdiv::render_json(r, cfg));
  CHECK(doc.contains("config"));
  CHECK(doc.contains("rows"));
  CHECK(doc.contains("summary"));
  CHECK(doc["config"]["command"] == "immersion-check");
  CHECK(doc["summary"]["pass"].is_boolean());
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][0].contains("realization_residual"));
}
