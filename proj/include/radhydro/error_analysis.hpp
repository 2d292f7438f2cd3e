#pragma once

// Distance between an eps solution and the limit solution, the energy
// functionals built on it, well-prepared initial data, and log-log rate fits.

#include <utility>
#include <vector>

#include "radhydro/timestepper.hpp"

namespace radhydro {

/// N = rho_eps - rho_0, U, Theta likewise; J0 = I0_eps - limit_I0(theta_0), J1 = I1_eps - q_0.
struct ErrorFields {
  double time = 0.0;
  SpectralField N;
  VectorField U;
  SpectralField Theta;
  SpectralField J0;
  VectorField J1;
};

/// Throws TimeMismatch when the two states are more than 1e-12 apart in time.
ErrorFields error_fields(const EpsState& eps_state, const LimitState& limit_state);

/// ||(N, U, Theta)||_s
double fluid_error_norm(const ErrorFields& e, int s);
/// ||(J0, J1)||_s, without the sqrt(eps) weight.
double radiation_error_norm(const ErrorFields& e, int s);

struct EnergyRecord {
  double time = 0.0;
  double fluid_energy = 0.0;  // ||E||_s
  double full_energy = 0.0;   // (||E||_s^2 + eps ||(J0, J1)||_s^2)^{1/2}
  double gamma = 0.0;         // full_energy^2
};

EnergyRecord energy(const ErrorFields& e, int s, double eps);

/// Sobolev index required for the convergence statement: smallest integer s > n/2 + 2.
int theorem_sobolev_index(int n_dims);

/// Fixed smooth shapes used to perturb well-prepared data; each has unit L^2 norm.
struct PerturbationShapes {
  SpectralField rho;
  VectorField u;
  SpectralField theta;
  SpectralField I0;
  VectorField I1;
};

PerturbationShapes default_perturbation_shapes(const Grid& grid);

struct WellPreparedData {
  EpsState eps_state;
  LimitState limit_state;
  /// ||fluid_eps - fluid_0||_s + sqrt(eps) ||(I0 - limit_I0, I1 - q0)||_s at t = 0.
  double hypothesis_lhs = 0.0;
  /// hypothesis_lhs / eps
  double l0 = 0.0;
};

/// Fluid data base + eps * amp * delta, radiation data limit pair + sqrt(eps) * amp * delta.
/// Throws PositivityLost when the perturbed density or temperature is not positive.
WellPreparedData well_prepared_init(const FluidState& base, double eps, double amp, int s,
                                    const PerturbationShapes& shapes);
WellPreparedData well_prepared_init(const FluidState& base, double eps, double amp, int s);

/// The left-hand side above for arbitrary states at a common time.
double hypothesis_lhs(const EpsState& eps_state, const LimitState& limit_state, double eps, int s);

struct RateFit {
  std::vector<double> eps_values;  // strictly decreasing
  std::vector<double> errors;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through (log eps, log error). Throws DegenerateFit for fewer
/// than three pairs, non-positive errors or eps, or repeated eps values.
RateFit fit_rate(std::vector<std::pair<double, double>> pairs);

struct GammaBound {
  double max_gamma_over_eps2 = 0.0;
  bool pass = true;
};

inline constexpr double kDefaultGammaBound = 100.0;

/// sup_t Gamma(t) / eps^2 and whether it stays below `bound`.
GammaBound gamma_bound_check(const std::vector<EnergyRecord>& records, double eps, double bound = kDefaultGammaBound);

}  // namespace radhydro
