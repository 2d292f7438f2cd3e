#include "radhydro/fluid.hpp"

#include <sstream>
#include <stdexcept>

#include "radhydro/errors.hpp"

namespace radhydro {

void FluidParams::validate(int n_dims) const {
  if (!(mu > 0.0)) throw std::invalid_argument("FluidParams: mu must be positive");
  if (!(2.0 * mu + n_dims * lambda > 0.0)) throw std::invalid_argument("FluidParams: need 2 mu + n lambda > 0");
  if (!(kappa > 0.0)) throw std::invalid_argument("FluidParams: kappa must be positive");
}

void FluidState::check_positive() const {
  if (!all_finite()) throw BlowUp("non-finite fluid state");
  const double rho_min = rho.min();
  const double theta_min = theta.min();
  if (!(rho_min >= kPositivityFloor) || !(theta_min >= kPositivityFloor)) {
    std::ostringstream msg;
    msg << "non-positive fluid state: min rho = " << rho_min << ", min theta = " << theta_min;
    throw NonPositiveState(msg.str());
  }
}

TensorField strain(const VectorField& u) {
  const int n = u.dims();
  std::vector<VectorField> du;  // du[j][i] = d_i u_j
  for (int j = 0; j < n; ++j) du.push_back(grad(u[j]));
  TensorField d(u.grid());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      d(i, j) = 0.5 * (du[j][i] + du[i][j]);
    }
  }
  return d;
}

TensorField viscous_stress(const VectorField& u, const FluidParams& p) {
  TensorField psi = strain(u);
  const SpectralField divu = div(u);
  for (int i = 0; i < psi.dims(); ++i) {
    for (int j = 0; j < psi.dims(); ++j) {
      psi(i, j) *= 2.0 * p.mu;
    }
    psi(i, i) += p.lambda * divu;
  }
  return psi;
}

VectorField div(const TensorField& t) {
  const int n = t.dims();
  std::vector<SpectralField> rows;
  for (int i = 0; i < n; ++i) {
    std::vector<SpectralField> row;
    for (int j = 0; j < n; ++j) row.push_back(t(i, j));
    rows.push_back(div(VectorField(std::move(row))));
  }
  return VectorField(std::move(rows));
}

SpectralField dissipation(const VectorField& u, const FluidParams& p) {
  const TensorField d = strain(u);
  SpectralField divu(u.grid());
  SpectralField sum(u.grid());
  for (int i = 0; i < d.dims(); ++i) {
    divu += d(i, i);
    for (int j = 0; j < d.dims(); ++j) sum += d(i, j) * d(i, j);
  }
  return dealias(2.0 * p.mu * sum + p.lambda * (divu * divu));
}

namespace {

// Shared by both systems; the callers differ only in the momentum and heat sources.
FluidTendency fluid_rhs_common(const FluidState& f, const VectorField* momentum_source, const SpectralField& heat_source,
                               const FluidParams& p) {
  f.check_positive();
  const Grid& g = f.grid();
  const int n = g.dims();

  std::vector<SpectralField> mass_flux;
  for (int j = 0; j < n; ++j) mass_flux.push_back(dealias(f.rho * f.u[j]));
  SpectralField d_rho = -div(VectorField(std::move(mass_flux)));

  // (1/rho) [ -grad(rho theta) + div Psi(u) + source ]
  VectorField force = div(viscous_stress(f.u, p)) - grad(dealias(f.rho * f.theta));
  if (momentum_source != nullptr) force += *momentum_source;

  VectorField d_u(g);
  for (int i = 0; i < n; ++i) {
    const VectorField grad_ui = grad(f.u[i]);
    d_u[i] = dealias(force[i] / f.rho) - dealias(dot(f.u, grad_ui));
  }

  const SpectralField divu = div(f.u);
  const SpectralField heating = p.kappa * laplacian(f.theta) + dissipation(f.u, p) + heat_source;
  SpectralField d_theta =
      dealias(heating / f.rho) - dealias(dot(f.u, grad(f.theta))) - dealias(f.theta * divu);

  return {std::move(d_rho), std::move(d_u), std::move(d_theta)};
}

}  // namespace

FluidTendency fluid_rhs_eps(const FluidState& f, const RadiationMoments& rad, double eps, const FluidParams& p) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("fluid_rhs_eps: eps must be positive");
  }
  const VectorField source = eps * rad.I1;
  return fluid_rhs_common(f, &source, rad.I0 - emission(f.theta), p);
}

FluidTendency fluid_rhs_limit(const FluidState& f, const VectorField& q0, const FluidParams& p) {
  return fluid_rhs_common(f, nullptr, -div(q0), p);
}

}  // namespace radhydro
