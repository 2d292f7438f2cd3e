#pragma once

// Run configuration: a strict JSON schema (unknown keys are errors) with
// every default filled in after loading.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radhydro/error_analysis.hpp"
#include "radhydro/fluid.hpp"
#include "radhydro/timestepper.hpp"

namespace radhydro {

enum class Mode { SimulateEps, SimulateLimit, ConvergenceStudy, ClosureCheck };

std::string to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& name);

/// amplitude * sin(k.x) or amplitude * cos(k.x)
struct TrigTerm {
  double amplitude = 0.0;
  bool cosine = false;
  std::array<int, 2> k{1, 0};
};

/// mean + sum of trigonometric terms
struct ProfileSpec {
  double mean = 0.0;
  std::vector<TrigTerm> terms;

  SpectralField sample(const Grid& grid) const;
};

/// Overrides for the well-prepared perturbation shapes; absent entries keep the
/// defaults. Every shape is rescaled to unit L^2 norm.
struct ShapeSpec {
  std::optional<ProfileSpec> rho;
  std::optional<std::vector<ProfileSpec>> u;
  std::optional<ProfileSpec> theta;
  std::optional<ProfileSpec> I0;
  std::optional<std::vector<ProfileSpec>> I1;

  bool empty() const { return !rho && !u && !theta && !I0 && !I1; }
  PerturbationShapes sample(const Grid& grid) const;
};

struct InitialSpec {
  ProfileSpec rho;
  std::vector<ProfileSpec> u;  // one per dimension
  ProfileSpec theta;
  double perturbation_amp = 0.0;
  ShapeSpec shapes;

  FluidState sample(const Grid& grid) const;
};

/// Acceptance thresholds checked at the end of a run.
struct Bounds {
  std::array<double, 2> fluid_slope{0.9, 1.3};
  std::array<double, 2> radiation_slope{0.45, 1.3};
  double min_r_squared = 0.98;
  double gamma_max = 100.0;      // bound on sup_t Gamma / eps^2
  double gamma_spread = 2.0;     // max / min of sup_t Gamma / eps^2 across the sweep
  double l0_spread = 1.5;        // max / min of the initial-data constant across the sweep
  double closure_residual = 1e-10;
  double mass_drift = 1e-10;
  double moment_residual = 1e-10;
};

struct KineticSpec {
  int ordinates = 8;
  std::vector<std::array<double, 2>> sigma_pairs{{1.0, 0.0}, {1.0, 1.0}};  // (sigma_a, sigma_s)
  double eps = 0.05;
  double t_end = 0.05;
  double dt = 1e-3;
};

struct RunConfig {
  Mode mode = Mode::ConvergenceStudy;
  int n_dims = 1;
  int points_per_dim = 64;
  FluidParams fluid;
  std::optional<double> eps;
  std::vector<double> eps_list;
  double t_end = 0.5;
  double output_interval = 0.05;
  StepControl step;
  InitialSpec initial;
  int sobolev_index = 3;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  Bounds bounds;
  KineticSpec kinetic;

  Grid grid() const { return Grid(n_dims, points_per_dim); }
};

/// Default initial profiles: rho = 1 + 0.1 sin x1, u1 = 0.1 sin x1, theta = 1 + 0.1 cos x1.
InitialSpec default_initial_spec(int n_dims);

/// Parses and validates a configuration document. `mode_override` (the CLI
/// subcommand) must agree with a "mode" key when both are present.
RunConfig parse_config(const std::string& text, std::optional<Mode> mode_override = std::nullopt);
RunConfig load_config(const std::string& path, std::optional<Mode> mode_override = std::nullopt);

/// Canonical JSON form with all defaults filled in.
nlohmann::json to_json(const RunConfig& c);

}  // namespace radhydro
