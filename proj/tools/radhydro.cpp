// radhydro: command-line driver.
//
//   radhydro <mode> --config PATH [--out DIR] [--threads N] [--strict|--no-strict]
//
// mode is one of simulate-eps, simulate-limit, convergence-study, closure-check.
// RADHYDRO_OUT, when set, overrides --out.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "radhydro/config.hpp"
#include "radhydro/errors.hpp"
#include "radhydro/runner.hpp"

int main(int argc, char** argv) {
  using namespace radhydro;

  CLI::App app{"Pseudo-spectral radiation hydrodynamics: eps-system, limit system, and convergence studies"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  bool strict = true;

  const std::pair<Mode, const char*> modes[] = {
      {Mode::SimulateEps, "integrate the eps system for one eps"},
      {Mode::SimulateLimit, "integrate the limit system"},
      {Mode::ConvergenceStudy, "eps sweep against the limit solution with rate fits"},
      {Mode::ClosureCheck, "discrete-ordinates consistency of the P1 moment system"},
  };
  for (const auto& [m, about] : modes) {
    auto* sub = app.add_subcommand(to_string(m), about);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--threads", threads, "worker threads for independent eps runs")->check(CLI::PositiveNumber);
    sub->add_flag("--strict,!--no-strict", strict, "exit non-zero when any configured bound fails (default on)");
  }

  CLI11_PARSE(app, argc, argv);

  const Mode mode = *parse_mode(app.get_subcommands().front()->get_name());
  if (const char* env = std::getenv("RADHYDRO_OUT"); env != nullptr && *env != '\0') out_dir = env;

  try {
    const RunConfig config = load_config(config_path, mode);
    RunOptions options;
    options.output_dir = out_dir;
    options.threads = threads;
    options.strict = strict;
    const RunSummary summary = run(config, options);

    const std::string dir = out_dir.empty() ? config.output_dir : out_dir;
    for (const auto& c : summary.checks) {
      std::printf("%-4s %-20s %.6e  (%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.bound.c_str());
    }
    std::printf("wall time %.3f s; outputs in %s\n", summary.wall_time, dir.c_str());
    return summary.exit_status;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 3;
  }
}
