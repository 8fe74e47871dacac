// Experiment runner: each subcommand draws a seeded sample set, evaluates
// one verification table and writes it as CSV or JSON. Exit code 0 iff
// every asserted tolerance passed, 2 on configuration errors.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "logdiv/experiments.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  long long seed_override = -1;
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment config")
      ->required();
  cmd->add_option("--out", opts.out_path,
                  "output path (overrides config; '-' for stdout)");
  cmd->add_option("--seed", opts.seed_override, "override the config seed");
  cmd->add_flag("--serial", opts.serial,
                "run the serial reference path instead of OpenMP");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logdiv experiments"};
  app.require_subcommand(1);

  CommonOpts opts;
  for (const std::string& name : logdiv::command_names()) {
    CLI::App* cmd = app.add_subcommand(name);
    add_common(cmd, opts);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    logdiv::ExperimentConfig cfg =
        logdiv::load_config_file(opts.config_path);
    if (opts.seed_override >= 0) {
      cfg.seed = static_cast<uint64_t>(opts.seed_override);
    }
    const logdiv::ExecPolicy policy = opts.serial
                                          ? logdiv::ExecPolicy::serial
                                          : logdiv::ExecPolicy::parallel;
    const logdiv::RunResult result = logdiv::run_command(command, cfg, policy);
    logdiv::write_output(result, cfg, opts.out_path);
    std::cerr << command << ": " << (result.pass ? "pass" : "FAIL")
              << " (max_error " << result.summary["max_error"].dump() << ")\n";
    return result.pass ? 0 : 1;
  } catch (const logdiv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
