#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "logdiv/generator.hpp"
#include "logdiv/parallel.hpp"
#include "logdiv/types.hpp"

namespace logdiv {

// Experiment configuration, parsed from JSON with exact field names;
// unknown fields are rejected. Identical config + seed produce
// byte-identical output files.
struct GridSpec {
  std::optional<double> t_max;  // command defaults: 0.1 grids, 0.05 fits
  std::optional<int> steps;
};

struct FdStepSpec {
  double third = 1e-3;
  double fourth = 5e-3;
};

struct OutputSpec {
  std::string format = "csv";  // "csv" | "json"
  std::string path;            // empty => stdout
};

struct ExperimentConfig {
  std::string generator_id;
  std::optional<double> alpha;
  uint64_t seed = 12345;
  int samples = 100;
  GridSpec grid;
  FdStepSpec fd_steps;
  std::map<std::string, double> tolerances;
  OutputSpec output;
  bool inject_fault = false;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Builds the generator named by the config id: "ball_log(n,c,[m...],alpha)"
// (alpha optional in the id, else taken from the config) or "quadratic(n)".
// A contradictory alpha between id and config is a ConfigError.
Generator generator_from_config(const ExperimentConfig& cfg);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct RunResult {
  std::string command;
  Table table;
  nlohmann::json summary;  // carries max_error, pass and per-command extras
  bool pass = false;
};

// The experiment kernels. Rows are pure functions of (config, row index);
// the parallel policy distributes rows and stores them by index, so both
// policies produce identical tables.
RunResult run_equivalence(const ExperimentConfig& cfg, ExecPolicy policy);
RunResult run_curvature(const ExperimentConfig& cfg, ExecPolicy policy);
RunResult run_pythagoras(const ExperimentConfig& cfg, ExecPolicy policy);
RunResult run_expansion(const ExperimentConfig& cfg, ExecPolicy policy);
RunResult run_immersion_check(const ExperimentConfig& cfg, ExecPolicy policy);

// Dispatch by CLI subcommand name.
RunResult run_command(const std::string& name, const ExperimentConfig& cfg,
                      ExecPolicy policy);
std::vector<std::string> command_names();

// CSV: '.' decimal, 17 significant digits, mandatory header row. Vector
// cells are ';'-joined. JSON: {"config":..., "rows":[...], "summary":...}.
std::string render_csv(const RunResult& result);
std::string render_json(const RunResult& result, const ExperimentConfig& cfg);

// Writes to cfg.output.path (or out_override if nonempty; "-" or empty
// path means stdout).
void write_output(const RunResult& result, const ExperimentConfig& cfg,
                  const std::string& out_override);

// Default tolerance per named check, overridable through cfg.tolerances.
double tolerance_or(const ExperimentConfig& cfg, const std::string& name,
                    double fallback);

}  // namespace logdiv
