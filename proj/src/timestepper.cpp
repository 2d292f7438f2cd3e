#include "radhydro/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "radhydro/errors.hpp"

namespace radhydro {

void StepControl::validate() const {
  if (!(dt_max > 0.0)) throw std::invalid_argument("StepControl: dt_max must be positive");
  if (!(cfl_advective > 0.0 && cfl_advective <= 1.0)) {
    throw std::invalid_argument("StepControl: cfl_advective must lie in (0, 1]");
  }
  if (!(cfl_diffusive > 0.0 && cfl_diffusive <= 1.0)) {
    throw std::invalid_argument("StepControl: cfl_diffusive must lie in (0, 1]");
  }
}

RadiationMoments radiation_exact_substep(const RadiationMoments& rad, const SpectralField& theta_frozen, double eps,
                                         double dt) {
  if (!(eps > 0.0)) throw std::invalid_argument("radiation_exact_substep: eps must be positive");
  if (dt < 0.0) throw std::invalid_argument("radiation_exact_substep: dt must be non-negative");
  if (dt == 0.0) return rad;

  using cplx = std::complex<double>;
  const Grid& g = rad.grid();
  const int n = g.dims();
  const Spectrum source = forward(emission(theta_frozen));
  Spectrum a = forward(rad.I0);
  std::vector<Spectrum> b;
  for (int j = 0; j < n; ++j) b.push_back(forward(rad.I1[j]));

  const double tau = dt / eps;
  const double decay = std::exp(-tau);
  const cplx I(0.0, 1.0);

  for (Eigen::Index m = 0; m < g.size(); ++m) {
    double kvec[2] = {0.0, 0.0};
    double k2 = 0.0;
    for (int j = 0; j < n; ++j) {
      kvec[j] = g.derivative_wavenumber(g.node(m, j));
      k2 += kvec[j] * kvec[j];
    }
    const cplx s = source.coeffs[m];
    if (k2 == 0.0) {
      a.coeffs[m] = s + (a.coeffs[m] - s) * decay;
      for (int j = 0; j < n; ++j) b[j].coeffs[m] *= decay;
      continue;
    }
    // Split I1hat into the component along k and the transverse remainder.
    const double k = std::sqrt(k2);
    cplx longitudinal = 0.0;
    for (int j = 0; j < n; ++j) longitudinal += (kvec[j] / k) * b[j].coeffs[m];

    // Steady state of the 2x2 block, then rotate-and-damp the deviation.
    const cplx a_eq = s / (1.0 + k2);
    const cplx l_eq = -I * k * a_eq;
    const cplx ya = a.coeffs[m] - a_eq;
    const cplx yl = longitudinal - l_eq;
    const double c = std::cos(k * tau);
    const double sn = std::sin(k * tau);
    const cplx ya_new = decay * (c * ya - I * sn * yl);
    const cplx yl_new = decay * (-I * sn * ya + c * yl);

    a.coeffs[m] = a_eq + ya_new;
    const cplx l_new = l_eq + yl_new;
    for (int j = 0; j < n; ++j) {
      const cplx transverse = b[j].coeffs[m] - (kvec[j] / k) * longitudinal;
      b[j].coeffs[m] = decay * transverse + (kvec[j] / k) * l_new;
    }
  }

  std::vector<SpectralField> comps;
  for (int j = 0; j < n; ++j) comps.push_back(inverse(b[j]));
  return {inverse(a), VectorField(std::move(comps))};
}

FluidState advance(const FluidState& fluid, const FluidTendency& k, double h) {
  return {fluid.rho + h * k.d_rho, fluid.u + h * k.d_u, fluid.theta + h * k.d_theta};
}

namespace {

template <typename Rhs>
FluidState rk4(const FluidState& f, double dt, Rhs&& rhs) {
  const FluidTendency k1 = rhs(f);
  const FluidTendency k2 = rhs(advance(f, k1, 0.5 * dt));
  const FluidTendency k3 = rhs(advance(f, k2, 0.5 * dt));
  const FluidTendency k4 = rhs(advance(f, k3, dt));
  const FluidTendency sum{k1.d_rho + 2.0 * k2.d_rho + 2.0 * k3.d_rho + k4.d_rho,
                          k1.d_u + 2.0 * k2.d_u + 2.0 * k3.d_u + k4.d_u,
                          k1.d_theta + 2.0 * k2.d_theta + 2.0 * k3.d_theta + k4.d_theta};
  return advance(f, sum, dt / 6.0);
}

void check_finite(bool finite, const char* where, double time) {
  if (!finite) {
    std::ostringstream msg;
    msg << where << ": non-finite values at t = " << time;
    throw BlowUp(msg.str());
  }
}

}  // namespace

EpsState step_eps(const EpsState& s, const FluidParams& p, double eps, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_eps: dt must be positive");
  s.fluid.check_positive();

  const RadiationMoments rad_half = radiation_exact_substep(s.rad, s.fluid.theta, eps, 0.5 * dt);
  FluidState fluid = rk4(s.fluid, dt, [&](const FluidState& f) { return fluid_rhs_eps(f, rad_half, eps, p); });
  check_finite(fluid.all_finite(), "step_eps", s.time + dt);
  fluid.check_positive();
  RadiationMoments rad = radiation_exact_substep(rad_half, fluid.theta, eps, 0.5 * dt);
  check_finite(rad.I0.all_finite() && rad.I1.all_finite(), "step_eps", s.time + dt);
  return {std::move(fluid), std::move(rad), s.time + dt};
}

LimitState step_limit(const LimitState& s, const FluidParams& p, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_limit: dt must be positive");
  s.fluid.check_positive();
  FluidState fluid = rk4(s.fluid, dt, [&](const FluidState& f) { return fluid_rhs_limit(f, limit_q(f.theta), p); });
  check_finite(fluid.all_finite(), "step_limit", s.time + dt);
  fluid.check_positive();
  return {std::move(fluid), s.time + dt};
}

double cfl_dt(const FluidState& fluid, double time, const FluidParams& p, const StepControl& c) {
  const Grid& g = fluid.grid();
  const double h = g.spacing();

  Eigen::ArrayXd speed2 = Eigen::ArrayXd::Zero(g.size());
  for (const auto& comp : fluid.u) speed2 += comp.values().square();
  const double u_max = std::sqrt(speed2.maxCoeff());
  const double sound = std::sqrt(std::max(fluid.theta.max(), 0.0));
  const double advective = c.cfl_advective * h / (u_max + sound);

  // Momentum diffuses with (2 mu + lambda) / rho along the compressive direction.
  const double diffusivity = std::max({p.mu, p.kappa, 2.0 * p.mu + p.lambda});
  const double diffusive = c.cfl_diffusive * h * h * fluid.rho.min() / diffusivity;

  return std::min({advective, diffusive, c.dt_max, c.t_end - time});
}

}  // namespace radhydro
