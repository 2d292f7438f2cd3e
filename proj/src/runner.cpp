#include "radhydro/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "radhydro/errors.hpp"
#include "radhydro/kinetic.hpp"

namespace radhydro {

using nlohmann::json;

bool RunSummary::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<double> output_times(double t_end, double interval) {
  std::vector<double> out;
  const auto count = long(std::ceil(t_end / interval - 1e-9));
  for (long k = 1; k < count; ++k) out.push_back(double(k) * interval);
  out.push_back(t_end);
  return out;
}

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string eps_tag(double eps) { return short_number(eps); }

double mass(const FluidState& f) { return f.rho.mean() * f.grid().volume(); }

double relative_drift(double m, double m0) { return std::abs(m - m0) / std::abs(m0); }

// Advances `state` through every output time, landing on each exactly, and
// calls `sample` at t = 0 and after each landing. Returns the step count.
template <typename State, typename Step, typename Sample>
long integrate(State& state, const FluidParams& p, StepControl control, const std::vector<double>& times, Step&& step,
               Sample&& sample) {
  long steps = 0;
  sample(state);
  for (double t_out : times) {
    control.t_end = t_out;
    while (t_out - state.time > 1e-12) {
      state = step(state, cfl_dt(state, p, control));
      ++steps;
    }
    state.time = t_out;
    sample(state);
  }
  return steps;
}

// Rethrows solver failures with the run's eps attached, keeping the error type.
template <typename Fn>
auto with_context(const std::string& context, Fn&& fn) {
  try {
    return fn();
  } catch (const NonPositiveState& e) {
    throw NonPositiveState(context + ": " + e.what());
  } catch (const BlowUp& e) {
    throw BlowUp(context + ": " + e.what());
  }
}

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int extra = std::min<int>(std::max(threads, 1), int(n)) - 1;
  for (int t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Check upper_check(std::string name, double value, double bound) {
  return {std::move(name), value, "<= " + short_number(bound), value <= bound};
}

Check range_check(std::string name, double value, const std::array<double, 2>& range) {
  return {std::move(name), value, "in [" + short_number(range[0]) + ", " + short_number(range[1]) + "]",
          value >= range[0] && value <= range[1]};
}

// max / min of a positive sequence; a sequence of zeros counts as constant.
double spread(const std::vector<double>& v) {
  const double hi = *std::max_element(v.begin(), v.end());
  const double lo = *std::min_element(v.begin(), v.end());
  if (hi == 0.0) return 1.0;
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

SeriesTable energy_table(const std::vector<EnergyRecord>& records) {
  SeriesTable t;
  t.columns = {"time", "fluid_energy", "full_energy", "gamma"};
  for (const auto& r : records) t.rows.push_back({r.time, r.fluid_energy, r.full_energy, r.gamma});
  return t;
}

SeriesTable state_series_header(bool with_radiation) {
  SeriesTable t;
  t.columns = {"time", "mass", "rho_min", "theta_min", "rho_l2", "u_l2", "theta_l2"};
  if (with_radiation) {
    for (const char* c : {"I0_l2", "I1_l2", "relaxation_gap_l2"}) t.columns.push_back(c);
  } else {
    t.columns.push_back("closure_residual");
  }
  return t;
}

std::vector<double> fluid_row(double time, const FluidState& f) {
  return {time,
          mass(f),
          f.rho.min(),
          f.theta.min(),
          sobolev_norm(f.rho, 0),
          sobolev_norm(f.u, 0),
          sobolev_norm(f.theta, 0)};
}

struct LimitRun {
  std::vector<LimitState> samples;
  SeriesTable series;
  double max_closure_residual = 0.0;
  double mass_drift = 0.0;
  long steps = 0;
};

LimitRun run_limit(const RunConfig& c, const FluidState& base) {
  LimitRun out;
  out.series = state_series_header(false);
  LimitState state{base, 0.0};
  const double m0 = mass(base);
  out.steps = with_context("limit run", [&] {
    return integrate(
        state, c.fluid, c.step, output_times(c.t_end, c.output_interval),
        [&](const LimitState& s, double dt) { return step_limit(s, c.fluid, dt); },
        [&](const LimitState& s) {
          const double residual = limit_closure_residual(s.fluid.theta, limit_q(s.fluid.theta));
          auto row = fluid_row(s.time, s.fluid);
          row.push_back(residual);
          out.series.rows.push_back(std::move(row));
          out.max_closure_residual = std::max(out.max_closure_residual, residual);
          out.mass_drift = std::max(out.mass_drift, relative_drift(mass(s.fluid), m0));
          out.samples.push_back(s);
        });
  });
  return out;
}

void run_simulate_eps(const RunConfig& c, RunSummary& summary) {
  const Grid grid = c.grid();
  const double eps = *c.eps;
  const int si = c.sobolev_index;
  const FluidState base = c.initial.sample(grid);
  const WellPreparedData data =
      well_prepared_init(base, eps, c.initial.perturbation_amp, si, c.initial.shapes.sample(grid));
  // The limit solution is the reference for the energy records.
  const LimitRun limit = run_limit(c, base);
  EpsState state = data.eps_state;
  const double m0 = mass(state.fluid);

  EpsRunResult result;
  result.eps = eps;
  result.hypothesis_lhs = data.hypothesis_lhs;
  result.l0 = data.l0;
  result.series = state_series_header(true);
  std::size_t sample = 0;
  result.steps = with_context("eps = " + eps_tag(eps), [&] {
    return integrate(
        state, c.fluid, c.step, output_times(c.t_end, c.output_interval),
        [&](const EpsState& s, double dt) { return step_eps(s, c.fluid, eps, dt); },
        [&](const EpsState& s) {
          auto row = fluid_row(s.time, s.fluid);
          const RadiationMoments eq = limit_moments(s.fluid.theta);
          const double gap = std::sqrt(sobolev_norm_squared(s.rad.I0 - eq.I0, 0) +
                                       sobolev_norm_squared(s.rad.I1 - eq.I1, 0));
          row.insert(row.end(), {sobolev_norm(s.rad.I0, 0), sobolev_norm(s.rad.I1, 0), gap});
          result.series.rows.push_back(std::move(row));
          result.mass_drift = std::max(result.mass_drift, relative_drift(mass(s.fluid), m0));

          const ErrorFields e = error_fields(s, limit.samples.at(sample++));
          const EnergyRecord rec = energy(e, si, eps);
          result.sup_fluid = std::max(result.sup_fluid, rec.fluid_energy);
          result.sup_radiation = std::max(result.sup_radiation, radiation_error_norm(e, si));
          result.records.push_back(rec);
        });
  });
  result.gamma = gamma_bound_check(result.records, eps, c.bounds.gamma_max);
  summary.checks.push_back(upper_check("mass_drift", result.mass_drift, c.bounds.mass_drift));
  summary.checks.push_back(upper_check("gamma_max", result.gamma.max_gamma_over_eps2, c.bounds.gamma_max));
  summary.series["series.csv"] = result.series;
  summary.series["energy.csv"] = energy_table(result.records);
  summary.runs.push_back(std::move(result));
}

void run_simulate_limit(const RunConfig& c, RunSummary& summary) {
  LimitRun limit = run_limit(c, c.initial.sample(c.grid()));
  summary.details["limit"] = {{"max_closure_residual", limit.max_closure_residual},
                              {"mass_drift", limit.mass_drift},
                              {"steps", limit.steps}};
  summary.checks.push_back(upper_check("closure_residual", limit.max_closure_residual, c.bounds.closure_residual));
  summary.checks.push_back(upper_check("mass_drift", limit.mass_drift, c.bounds.mass_drift));
  summary.series["series.csv"] = std::move(limit.series);
}

EpsRunResult run_eps_against_limit(const RunConfig& c, const FluidState& base, double eps, const LimitRun& limit) {
  const int s = c.sobolev_index;
  const WellPreparedData data = well_prepared_init(base, eps, c.initial.perturbation_amp, s, c.initial.shapes.sample(base.grid()));
  EpsState state = data.eps_state;
  const double m0 = mass(state.fluid);

  EpsRunResult r;
  r.eps = eps;
  r.hypothesis_lhs = data.hypothesis_lhs;
  r.l0 = data.l0;
  const std::string si = std::to_string(s);
  r.series.columns = {"time", "fluid_s0", "radiation_s0", "fluid_s" + si, "radiation_s" + si,
                      "full_energy_s" + si, "gamma_s" + si};

  std::size_t sample = 0;
  r.steps = with_context("eps = " + eps_tag(eps), [&] {
    return integrate(
        state, c.fluid, c.step, output_times(c.t_end, c.output_interval),
        [&](const EpsState& st, double dt) { return step_eps(st, c.fluid, eps, dt); },
        [&](const EpsState& st) {
          const ErrorFields e = error_fields(st, limit.samples.at(sample++));
          const EnergyRecord rec = energy(e, s, eps);
          const double fluid0 = fluid_error_norm(e, 0);
          const double rad0 = radiation_error_norm(e, 0);
          const double rads = radiation_error_norm(e, s);
          r.sup_fluid = std::max(r.sup_fluid, rec.fluid_energy);
          r.sup_radiation = std::max(r.sup_radiation, rads);
          r.sup_fluid_l2 = std::max(r.sup_fluid_l2, fluid0);
          r.sup_radiation_l2 = std::max(r.sup_radiation_l2, rad0);
          r.mass_drift = std::max(r.mass_drift, relative_drift(mass(st.fluid), m0));
          r.records.push_back(rec);
          r.series.rows.push_back({st.time, fluid0, rad0, rec.fluid_energy, rads, rec.full_energy, rec.gamma});
        });
  });
  r.gamma = gamma_bound_check(r.records, eps, c.bounds.gamma_max);
  return r;
}

void run_convergence_study(const RunConfig& c, const RunOptions& options, RunSummary& summary) {
  const FluidState base = c.initial.sample(c.grid());
  const LimitRun limit = run_limit(c, base);

  summary.runs.resize(c.eps_list.size());
  parallel_for(c.eps_list.size(), options.threads,
               [&](std::size_t i) { summary.runs[i] = run_eps_against_limit(c, base, c.eps_list[i], limit); });

  const std::string si = std::to_string(c.sobolev_index);
  std::vector<std::pair<double, double>> fluid, radiation, fluid0, radiation0;
  std::vector<double> gammas, l0s;
  double drift = limit.mass_drift;
  for (const auto& r : summary.runs) {
    fluid.emplace_back(r.eps, r.sup_fluid);
    radiation.emplace_back(r.eps, r.sup_radiation);
    fluid0.emplace_back(r.eps, r.sup_fluid_l2);
    radiation0.emplace_back(r.eps, r.sup_radiation_l2);
    gammas.push_back(r.gamma.max_gamma_over_eps2);
    l0s.push_back(r.l0);
    drift = std::max(drift, r.mass_drift);
  }
  const RateFit& fit_fluid = summary.rate_fits["fluid_s" + si] = fit_rate(fluid);
  const RateFit& fit_rad = summary.rate_fits["radiation_s" + si] = fit_rate(radiation);
  if (c.sobolev_index != 0) {
    summary.rate_fits["fluid_s0"] = fit_rate(fluid0);
    summary.rate_fits["radiation_s0"] = fit_rate(radiation0);
  }

  double growth = 0.0;
  for (std::size_t i = 1; i < gammas.size(); ++i) growth = std::max(growth, gammas[i] / gammas[i - 1]);

  summary.details["limit"] = {{"max_closure_residual", limit.max_closure_residual},
                              {"mass_drift", limit.mass_drift},
                              {"steps", limit.steps}};
  summary.details["limit_series"] = limit.series.rows.size();

  auto& checks = summary.checks;
  checks.push_back(range_check("fluid_slope", fit_fluid.slope, c.bounds.fluid_slope));
  checks.push_back({"fluid_r_squared", fit_fluid.r_squared, ">= " + short_number(c.bounds.min_r_squared),
                    fit_fluid.r_squared >= c.bounds.min_r_squared});
  checks.push_back(range_check("radiation_slope", fit_rad.slope, c.bounds.radiation_slope));
  checks.push_back(upper_check("l0_spread", spread(l0s), c.bounds.l0_spread));
  checks.push_back(upper_check("gamma_max", *std::max_element(gammas.begin(), gammas.end()), c.bounds.gamma_max));
  checks.push_back(upper_check("gamma_spread", spread(gammas), c.bounds.gamma_spread));
  checks.push_back({"gamma_growth", growth, "<= 1", growth <= 1.0 + 1e-9});
  checks.push_back(upper_check("closure_residual", limit.max_closure_residual, c.bounds.closure_residual));
  checks.push_back(upper_check("mass_drift", drift, c.bounds.mass_drift));

  summary.series["limit_series.csv"] = limit.series;
  for (const auto& r : summary.runs) summary.series["errors_eps_" + eps_tag(r.eps) + ".csv"] = r.series;
}

void run_closure_check(const RunConfig& c, RunSummary& summary) {
  const Grid grid = c.grid();
  const OrdinateSet ords = make_ordinates(c.n_dims, c.kinetic.ordinates);
  const FluidState base = c.initial.sample(grid);
  const PerturbationShapes shapes = c.initial.shapes.sample(grid);

  // A P1 field away from equilibrium: the limit pair plus a smooth flux perturbation.
  RadiationMoments p1 = limit_moments(base.theta);
  p1.I1 += 0.1 * shapes.I1;
  p1.I0 += 0.1 * shapes.I0;
  const KineticField p1_field = KineticField::from_moments(p1, ords);

  json cases = json::array();
  double worst = 0.0;
  for (const auto& [sigma_a, sigma_s] : c.kinetic.sigma_pairs) {
    const KineticCoefficients k{c.kinetic.eps, sigma_a, sigma_s};
    const MomentResiduals res = moment_system_check(p1_field, base.theta, k);
    worst = std::max({worst, res.r0, res.r1});
    cases.push_back({{"sigma_a", sigma_a}, {"sigma_s", sigma_s}, {"r0", res.r0}, {"r1", res.r1}});
  }

  // Short transport run from isotropic data at the local emission level.
  const SpectralField emitted = emission(base.theta);
  Eigen::ArrayXXd iso(grid.size(), ords.size());
  for (int a = 0; a < ords.size(); ++a) iso.col(a) = emitted.values();
  KineticField field(grid, ords, iso);
  const KineticCoefficients run_coeffs{c.kinetic.eps, c.kinetic.sigma_pairs.front()[0],
                                       c.kinetic.sigma_pairs.front()[1]};
  SeriesTable table;
  table.columns = {"time", "min_intensity", "p1_projection_residual", "I0_mean"};
  double min_intensity = field.intensity().minCoeff();
  double t = 0.0;
  auto record = [&] {
    const double m = field.intensity().minCoeff();
    min_intensity = std::min(min_intensity, m);
    table.rows.push_back({t, m, p1_projection_residual(field), moments(field).I0.mean()});
  };
  record();
  while (c.kinetic.t_end - t > 1e-12) {
    const double dt = std::min(c.kinetic.dt, c.kinetic.t_end - t);
    field = step_kinetic(field, base.theta, run_coeffs, dt);
    t += dt;
    record();
  }

  summary.details["closure"] = {{"ordinates", ords.size()},
                                {"cases", cases},
                                {"kinetic_run", {{"min_intensity", min_intensity}, {"t_end", c.kinetic.t_end}}}};
  summary.checks.push_back(upper_check("moment_residual", worst, c.bounds.moment_residual));
  summary.checks.push_back({"kinetic_nonnegative", min_intensity, ">= 0", min_intensity >= 0.0});
  summary.series["kinetic_series.csv"] = std::move(table);
}

json fit_json(const RateFit& f) {
  return {{"eps_values", f.eps_values},
          {"errors", f.errors},
          {"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared}};
}

void write_outputs(const RunSummary& summary, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, table] : summary.series) emit_series(table, (std::filesystem::path(dir) / name).string());
  emit_summary(summary, (std::filesystem::path(dir) / "summary.json").string());
}

}  // namespace

RunSummary run(const RunConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunSummary summary;
  summary.config = to_json(config);
  summary.mode = config.mode;

  switch (config.mode) {
    case Mode::SimulateEps: run_simulate_eps(config, summary); break;
    case Mode::SimulateLimit: run_simulate_limit(config, summary); break;
    case Mode::ConvergenceStudy: run_convergence_study(config, options, summary); break;
    case Mode::ClosureCheck: run_closure_check(config, summary); break;
  }

  summary.exit_status = (options.strict && !summary.all_pass()) ? 1 : 0;
  summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (options.write_files) {
    write_outputs(summary, options.output_dir.empty() ? config.output_dir : options.output_dir);
  }
  return summary;
}

void emit_series(const SeriesTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  if (!out) throw Error("error while writing " + path);
}

void emit_series(const std::vector<EnergyRecord>& records, const std::string& path) {
  emit_series(energy_table(records), path);
}

json summary_json(const RunSummary& s) {
  json runs = json::array();
  for (const auto& r : s.runs) {
    runs.push_back({{"eps", r.eps},
                    {"sup_fluid", r.sup_fluid},
                    {"sup_radiation", r.sup_radiation},
                    {"sup_fluid_l2", r.sup_fluid_l2},
                    {"sup_radiation_l2", r.sup_radiation_l2},
                    {"max_gamma_over_eps2", r.gamma.max_gamma_over_eps2},
                    {"gamma_pass", r.gamma.pass},
                    {"hypothesis_lhs", r.hypothesis_lhs},
                    {"l0", r.l0},
                    {"mass_drift", r.mass_drift},
                    {"steps", r.steps}});
  }
  json fits = json::object();
  for (const auto& [name, fit] : s.rate_fits) fits[name] = fit_json(fit);
  json checks = json::array();
  for (const auto& c : s.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
  }
  return {{"config", s.config}, {"mode", to_string(s.mode)}, {"runs", runs},       {"rate_fits", fits},
          {"details", s.details}, {"checks", checks},          {"exit_status", s.exit_status}};
}

void emit_summary(const RunSummary& summary, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << summary_json(summary).dump(2) << '\n';
  if (!out) throw Error("error while writing " + path);
}

}  // namespace radhydro
