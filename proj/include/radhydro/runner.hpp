#pragma once

// Run orchestration for the four CLI modes and deterministic result files.

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radhydro/config.hpp"
#include "radhydro/error_analysis.hpp"

namespace radhydro {

/// Rows of doubles under a fixed header.
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// One pass/fail acceptance bound evaluated at the end of a run.
struct Check {
  std::string name;
  double value = 0.0;
  std::string bound;
  bool pass = false;
};

struct EpsRunResult {
  double eps = 0.0;
  double sup_fluid = 0.0;      // sup_t ||(N, U, Theta)||_s
  double sup_radiation = 0.0;  // sup_t ||(J0, J1)||_s
  double sup_fluid_l2 = 0.0;
  double sup_radiation_l2 = 0.0;
  GammaBound gamma;
  double hypothesis_lhs = 0.0;
  double l0 = 0.0;
  double mass_drift = 0.0;
  long steps = 0;
  std::vector<EnergyRecord> records;
  SeriesTable series;
};

struct RunSummary {
  nlohmann::json config;
  Mode mode = Mode::ConvergenceStudy;
  double wall_time = 0.0;  // reported on stdout only; not serialized
  std::vector<EpsRunResult> runs;
  std::map<std::string, RateFit> rate_fits;
  nlohmann::json details = nlohmann::json::object();
  /// CSV tables keyed by output file name.
  std::map<std::string, SeriesTable> series;
  std::vector<Check> checks;
  int exit_status = 0;

  bool all_pass() const;
};

struct RunOptions {
  std::string output_dir;  // empty: use the config's output_dir
  int threads = 1;
  bool strict = true;
  bool write_files = true;
};

/// Output sampling times interval, 2 interval, ..., ending exactly at t_end.
std::vector<double> output_times(double t_end, double interval);

RunSummary run(const RunConfig& config, const RunOptions& options = {});

/// CSV with LF endings; every value printed with 17 significant digits.
void emit_series(const SeriesTable& table, const std::string& path);
void emit_series(const std::vector<EnergyRecord>& records, const std::string& path);
nlohmann::json summary_json(const RunSummary& summary);
void emit_summary(const RunSummary& summary, const std::string& path);

}  // namespace radhydro
