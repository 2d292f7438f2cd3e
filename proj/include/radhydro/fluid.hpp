#pragma once

// Viscous, heat-conducting perfect gas (P = rho * theta, e = theta) in
// primitive variables, coupled to the P1 radiation moments or to the
// eps -> 0 radiative flux q.

#include <vector>

#include "radhydro/radiation.hpp"
#include "radhydro/spectral.hpp"

namespace radhydro {

/// States with min rho or min theta below this are rejected.
inline constexpr double kPositivityFloor = 1e-6;

struct FluidParams {
  double mu = 0.01;
  double lambda = 0.01;
  double kappa = 0.01;

  /// Throws std::invalid_argument unless mu > 0, 2 mu + n lambda > 0, kappa > 0.
  void validate(int n_dims) const;
};

struct FluidState {
  SpectralField rho;
  VectorField u;
  SpectralField theta;

  const Grid& grid() const { return rho.grid(); }
  /// Throws BlowUp on non-finite values, NonPositiveState when rho or theta dips below kPositivityFloor.
  void check_positive() const;
  bool all_finite() const { return rho.all_finite() && u.all_finite() && theta.all_finite(); }
};

/// Dense n x n array of fields, row-major.
class TensorField {
 public:
  explicit TensorField(const Grid& grid) : n_(grid.dims()), entries_(n_ * n_, SpectralField(grid)) {}
  int dims() const { return n_; }
  const SpectralField& operator()(int i, int j) const { return entries_[i * n_ + j]; }
  SpectralField& operator()(int i, int j) { return entries_[i * n_ + j]; }

 private:
  int n_;
  std::vector<SpectralField> entries_;
};

/// D(u) = (grad u + grad u^T) / 2.
TensorField strain(const VectorField& u);
/// Psi(u) = 2 mu D(u) + lambda div(u) I.
TensorField viscous_stress(const VectorField& u, const FluidParams& p);
/// Row divergence: (div Psi)_i = sum_j d_j Psi_ij.
VectorField div(const TensorField& t);
/// Psi(u) : grad u = 2 mu |D(u)|^2 + lambda (div u)^2, dealiased.
SpectralField dissipation(const VectorField& u, const FluidParams& p);

struct FluidTendency {
  SpectralField d_rho;
  VectorField d_u;
  SpectralField d_theta;
};

/// Tendencies of the eps-coupled system: momentum source eps * I1, heat source I0 - theta^4.
FluidTendency fluid_rhs_eps(const FluidState& f, const RadiationMoments& rad, double eps, const FluidParams& p);

/// Tendencies of the limit system: no momentum source, heat source -div q0.
FluidTendency fluid_rhs_limit(const FluidState& f, const VectorField& q0, const FluidParams& p);

}  // namespace radhydro
