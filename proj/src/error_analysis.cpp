#include "radhydro/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "radhydro/errors.hpp"

namespace radhydro {

ErrorFields error_fields(const EpsState& eps_state, const LimitState& limit_state) {
  if (std::abs(eps_state.time - limit_state.time) > 1e-12) {
    std::ostringstream msg;
    msg << "error_fields: eps state at t = " << eps_state.time << " but limit state at t = " << limit_state.time;
    throw TimeMismatch(msg.str());
  }
  const FluidState& fe = eps_state.fluid;
  const FluidState& f0 = limit_state.fluid;
  const RadiationMoments reference = limit_moments(f0.theta);
  return {eps_state.time,
          fe.rho - f0.rho,
          fe.u - f0.u,
          fe.theta - f0.theta,
          eps_state.rad.I0 - reference.I0,
          eps_state.rad.I1 - reference.I1};
}

double fluid_error_norm(const ErrorFields& e, int s) {
  return std::sqrt(sobolev_norm_squared(e.N, s) + sobolev_norm_squared(e.U, s) + sobolev_norm_squared(e.Theta, s));
}

double radiation_error_norm(const ErrorFields& e, int s) {
  return std::sqrt(sobolev_norm_squared(e.J0, s) + sobolev_norm_squared(e.J1, s));
}

EnergyRecord energy(const ErrorFields& e, int s, double eps) {
  const double fluid = fluid_error_norm(e, s);
  const double rad = radiation_error_norm(e, s);
  const double gamma = fluid * fluid + eps * rad * rad;
  return {e.time, fluid, std::sqrt(gamma), gamma};
}

int theorem_sobolev_index(int n_dims) { return n_dims / 2 + 3; }

namespace {

SpectralField unit_l2(SpectralField f) { return f / sobolev_norm(f, 0); }

VectorField unit_l2(VectorField v) {
  const double norm = sobolev_norm(v, 0);
  return v * (1.0 / norm);
}

}  // namespace

PerturbationShapes default_perturbation_shapes(const Grid& grid) {
  const bool two_d = grid.dims() == 2;
  auto make = [&](auto fn) { return SpectralField::from_function(grid, fn); };
  auto y = [&](const std::array<double, 2>& x) { return two_d ? x[1] : 0.0; };

  SpectralField rho = make([&](const auto& x) { return std::cos(x[0] + y(x)); });
  SpectralField theta = make([&](const auto& x) { return std::sin(2.0 * x[0]) + (two_d ? std::cos(x[1]) : 0.0); });
  SpectralField I0 = make([&](const auto& x) { return std::cos(x[0]) + (two_d ? std::sin(2.0 * x[1]) : 0.0); });

  std::vector<SpectralField> u{make([&](const auto& x) { return std::sin(x[0]) * (two_d ? std::cos(x[1]) : 1.0); })};
  std::vector<SpectralField> I1{make([&](const auto& x) { return std::sin(x[0]); })};
  if (two_d) {
    u.push_back(make([](const auto& x) { return -std::cos(x[0]) * std::sin(x[1]); }));
    I1.push_back(make([](const auto& x) { return std::cos(2.0 * x[1]); }));
  }
  return {unit_l2(rho), unit_l2(VectorField(std::move(u))), unit_l2(theta), unit_l2(I0),
          unit_l2(VectorField(std::move(I1)))};
}

double hypothesis_lhs(const EpsState& eps_state, const LimitState& limit_state, double eps, int s) {
  const ErrorFields e = error_fields(eps_state, limit_state);
  return fluid_error_norm(e, s) + std::sqrt(eps) * radiation_error_norm(e, s);
}

WellPreparedData well_prepared_init(const FluidState& base, double eps, double amp, int s,
                                    const PerturbationShapes& shapes) {
  if (!(eps > 0.0)) throw std::invalid_argument("well_prepared_init: eps must be positive");
  if (!(amp >= 0.0)) throw std::invalid_argument("well_prepared_init: amp must be non-negative");

  const double fluid_scale = eps * amp;
  const double rad_scale = std::sqrt(eps) * amp;
  FluidState fluid{base.rho + fluid_scale * shapes.rho, base.u + fluid_scale * shapes.u,
                   base.theta + fluid_scale * shapes.theta};
  if (!(fluid.rho.min() > 0.0) || !(fluid.theta.min() > 0.0)) {
    std::ostringstream msg;
    msg << "well_prepared_init: perturbed data not positive (min rho = " << fluid.rho.min()
        << ", min theta = " << fluid.theta.min() << ")";
    throw PositivityLost(msg.str());
  }
  const RadiationMoments reference = limit_moments(base.theta);
  RadiationMoments rad{reference.I0 + rad_scale * shapes.I0, reference.I1 + rad_scale * shapes.I1};

  WellPreparedData out{EpsState{std::move(fluid), std::move(rad), 0.0}, LimitState{base, 0.0}, 0.0, 0.0};
  out.hypothesis_lhs = hypothesis_lhs(out.eps_state, out.limit_state, eps, s);
  out.l0 = out.hypothesis_lhs / eps;
  return out;
}

WellPreparedData well_prepared_init(const FluidState& base, double eps, double amp, int s) {
  return well_prepared_init(base, eps, amp, s, default_perturbation_shapes(base.grid()));
}

RateFit fit_rate(std::vector<std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw DegenerateFit("fit_rate: need at least three (eps, error) pairs");
  for (const auto& [eps, err] : pairs) {
    if (!(eps > 0.0)) throw DegenerateFit("fit_rate: eps values must be positive");
    if (!(err > 0.0)) throw DegenerateFit("fit_rate: errors must be positive");
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].first == pairs[i - 1].first) throw DegenerateFit("fit_rate: repeated eps value");
  }

  const auto n = double(pairs.size());
  double sx = 0, sy = 0;
  for (const auto& [eps, err] : pairs) {
    sx += std::log(eps);
    sy += std::log(err);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [eps, err] : pairs) {
    const double dx = std::log(eps) - mx, dy = std::log(err) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  RateFit fit;
  for (const auto& [eps, err] : pairs) {
    fit.eps_values.push_back(eps);
    fit.errors.push_back(err);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // A perfectly flat error sequence is fit exactly by a zero slope.
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

GammaBound gamma_bound_check(const std::vector<EnergyRecord>& records, double eps, double bound) {
  if (records.empty()) throw std::invalid_argument("gamma_bound_check: empty record series");
  double worst = 0.0;
  for (const auto& r : records) worst = std::max(worst, r.gamma / (eps * eps));
  return {worst, worst <= bound};
}

}  // namespace radhydro
