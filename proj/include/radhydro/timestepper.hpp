#pragma once

// Time integration of the eps-coupled and limit systems.
//
// The eps system is advanced by Strang splitting: the radiation moments relax
// exactly (per Fourier mode, theta^4 frozen) over half steps around one RK4
// step of the fluid with the radiation moments held fixed. Neither the
// step size nor stability depends on eps.

#include <limits>

#include "radhydro/fluid.hpp"
#include "radhydro/radiation.hpp"

namespace radhydro {

struct EpsState {
  FluidState fluid;
  RadiationMoments rad;
  double time = 0.0;
};

struct LimitState {
  FluidState fluid;
  double time = 0.0;
};

struct StepControl {
  double dt_max = std::numeric_limits<double>::infinity();
  double cfl_advective = 0.4;
  double cfl_diffusive = 0.4;
  double t_end = 0.5;

  void validate() const;
};

/// Exact solution over [0, dt] of the linear radiation subsystem with theta^4 frozen.
RadiationMoments radiation_exact_substep(const RadiationMoments& rad, const SpectralField& theta_frozen, double eps,
                                         double dt);

/// fluid + h * tendency
FluidState advance(const FluidState& fluid, const FluidTendency& k, double h);

EpsState step_eps(const EpsState& s, const FluidParams& p, double eps, double dt);
LimitState step_limit(const LimitState& s, const FluidParams& p, double dt);

/// Largest admissible step: advective and diffusive CFL limits, dt_max, and the
/// remaining time to c.t_end. Independent of eps.
double cfl_dt(const FluidState& fluid, double time, const FluidParams& p, const StepControl& c);
inline double cfl_dt(const EpsState& s, const FluidParams& p, const StepControl& c) {
  return cfl_dt(s.fluid, s.time, p, c);
}
inline double cfl_dt(const LimitState& s, const FluidParams& p, const StepControl& c) {
  return cfl_dt(s.fluid, s.time, p, c);
}

}  // namespace radhydro
