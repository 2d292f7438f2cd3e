#include "radhydro/radiation.hpp"

#include <stdexcept>

namespace radhydro {

SpectralField emission(const SpectralField& theta) {
  return dealias(SpectralField(theta.grid(), theta.values().square().square()));
}

RadiationTendency radiation_rhs(const RadiationMoments& rad, const SpectralField& theta, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("radiation_rhs: eps must be positive");
  }
  SpectralField d_I0 = (emission(theta) - rad.I0 - div(rad.I1)) / eps;
  VectorField d_I1 = grad(rad.I0);
  for (int j = 0; j < d_I1.dims(); ++j) {
    d_I1[j] = (-rad.I1[j] - d_I1[j]) / eps;
  }
  return {std::move(d_I0), std::move(d_I1)};
}

SpectralField equilibrium_intensity(const SpectralField& emission_field) { return helmholtz_inverse(emission_field); }

SpectralField limit_I0(const SpectralField& theta) { return equilibrium_intensity(emission(theta)); }

VectorField limit_q(const SpectralField& theta) { return -grad(limit_I0(theta)); }

RadiationMoments limit_moments(const SpectralField& theta) {
  SpectralField I0 = limit_I0(theta);
  VectorField I1 = -grad(I0);
  return {std::move(I0), std::move(I1)};
}

double limit_closure_residual(const SpectralField& theta, const VectorField& q) {
  VectorField r = q - grad(div(q)) + grad(emission(theta));
  return sobolev_norm(r, 0);
}

}  // namespace radhydro
