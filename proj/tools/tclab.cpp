// Command-line runner: tclab <experiment> --config <path> [--out <dir>] [--seed <u64>] [--jobs <n>]

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "tclab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Taylor-Couette linear stability lab"};
  std::string experiment;
  std::string config_path;
  std::string out;
  std::optional<std::int64_t> seed;
  std::optional<int> jobs;
  bool list = false;
  bool print_config = false;

  app.add_flag("--list", list, "List experiment names and exit");
  app.add_option("experiment", experiment, "Experiment to run");
  app.add_option("--config", config_path, "TOML config file (defaults when omitted)");
  app.add_option("--out", out, "Output directory (TCLAB_OUT overrides)");
  app.add_option("--seed", seed, "Random seed")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", jobs, "Tuples run concurrently")->check(CLI::PositiveNumber);
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& name : tclab::experiment_names()) std::cout << name << '\n';
    return 0;
  }
  if (experiment.empty()) {
    std::cerr << "error: an experiment name is required (see --list)\n";
    return 2;
  }

  try {
    tclab::ExperimentConfig config =
        config_path.empty() ? tclab::default_config(experiment)
                            : tclab::load_config(config_path, experiment);
    if (!out.empty()) config.out = out;
    if (const char* env = std::getenv("TCLAB_OUT"); env && *env) config.out = env;
    if (seed) config.seed = *seed;
    if (jobs) config.jobs = *jobs;
    tclab::validate(config);
    if (print_config) {
      std::cout << tclab::emit_config(config);
      return 0;
    }
    tclab::ensure_output_dir(config.out);

    const tclab::ReportBundle report = tclab::run(config);
    report.write(config.out);
    for (const auto& v : report.verdicts) {
      std::cout << (v.passed ? "PASS " : "FAIL ") << v.id << ": " << v.detail << '\n';
    }
    for (const auto& f : report.tuple_failures) std::cout << "ERROR " << f << '\n';
    std::cout << "report written to " << config.out << " (" << tclab::format_number(report.wall_seconds)
              << " s)\n";
    return report.all_passed() ? 0 : 1;
  } catch (const tclab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
