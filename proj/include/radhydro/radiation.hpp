#pragma once

// Gray P1 radiation moments with all transport constants set to one:
//   eps dI0/dt + div I1 = theta^4 - I0
//   eps dI1/dt + grad I0 = -I1
// and the eps -> 0 closure I0 = (I - Laplacian)^{-1} theta^4, q = -grad I0.

#include "radhydro/spectral.hpp"

namespace radhydro {

struct RadiationMoments {
  SpectralField I0;
  VectorField I1;

  const Grid& grid() const { return I0.grid(); }
};

struct RadiationTendency {
  SpectralField d_I0;
  VectorField d_I1;
};

/// Dealiased theta^4.
SpectralField emission(const SpectralField& theta);

RadiationTendency radiation_rhs(const RadiationMoments& rad, const SpectralField& theta, double eps);

/// (I - Laplacian)^{-1} applied to an already dealiased emission field.
SpectralField equilibrium_intensity(const SpectralField& emission_field);

SpectralField limit_I0(const SpectralField& theta);
VectorField limit_q(const SpectralField& theta);
/// The pair (limit_I0, limit_q), which is the steady state of radiation_rhs.
RadiationMoments limit_moments(const SpectralField& theta);

/// L^2 norm of -grad div q + q + grad theta^4.
double limit_closure_residual(const SpectralField& theta, const VectorField& q);

}  // namespace radhydro
