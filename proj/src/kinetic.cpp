#include "radhydro/kinetic.hpp"

#include <cmath>
#include <stdexcept>

#include "radhydro/errors.hpp"

namespace radhydro {

double OrdinateSet::sphere_measure() const { return n_dims == 1 ? 2.0 : 2.0 * M_PI; }

OrdinateSet make_ordinates(int n_dims, int count) {
  OrdinateSet ords;
  ords.n_dims = n_dims;
  if (n_dims == 1) {
    ords.directions = {Eigen::Vector2d(-1.0, 0.0), Eigen::Vector2d(1.0, 0.0)};
    ords.weights = {1.0, 1.0};
    return ords;
  }
  if (n_dims != 2) throw std::invalid_argument("make_ordinates: n_dims must be 1 or 2");
  if (count < 4 || count % 2 != 0) {
    throw std::invalid_argument("make_ordinates: count must be even and >= 4");
  }
  for (int a = 0; a < count; ++a) {
    const double phi = 2.0 * M_PI * a / count;
    ords.directions.emplace_back(std::cos(phi), std::sin(phi));
    ords.weights.push_back(2.0 * M_PI / count);
  }
  return ords;
}

void KineticCoefficients::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("kinetic: eps must be positive");
  if (!(sigma_a > 0.0)) throw std::invalid_argument("kinetic: sigma_a must be positive");
  if (!(sigma_s >= 0.0)) throw std::invalid_argument("kinetic: sigma_s must be non-negative");
}

KineticField::KineticField(const Grid& grid, OrdinateSet ordinates)
    : KineticField(grid, ordinates, Eigen::ArrayXXd::Zero(grid.size(), ordinates.size())) {}

KineticField::KineticField(const Grid& grid, OrdinateSet ordinates, Eigen::ArrayXXd intensity)
    : grid_(grid), ordinates_(std::move(ordinates)), intensity_(std::move(intensity)) {
  if (intensity_.rows() != grid_.size() || intensity_.cols() != ordinates_.size()) {
    throw std::invalid_argument("KineticField: intensity shape does not match grid x ordinates");
  }
  if (ordinates_.n_dims != grid_.dims()) {
    throw std::invalid_argument("KineticField: ordinate dimension does not match grid");
  }
}

KineticField KineticField::from_moments(const RadiationMoments& m, const OrdinateSet& ordinates) {
  const Grid& g = m.grid();
  Eigen::ArrayXXd out(g.size(), ordinates.size());
  for (int a = 0; a < ordinates.size(); ++a) {
    out.col(a) = m.I0.values();
    for (int j = 0; j < g.dims(); ++j) out.col(a) += ordinates.directions[a][j] * m.I1[j].values();
  }
  return KineticField(g, ordinates, std::move(out));
}

namespace {

Eigen::ArrayXd angular_average(const KineticField& I) {
  const auto& ords = I.ordinates();
  Eigen::ArrayXd avg = Eigen::ArrayXd::Zero(I.grid().size());
  for (int a = 0; a < ords.size(); ++a) avg += ords.weights[a] * I.intensity().col(a);
  return avg / ords.sphere_measure();
}

}  // namespace

KineticField kinetic_rhs(const KineticField& I, const SpectralField& theta, const KineticCoefficients& c) {
  c.validate();
  const auto& ords = I.ordinates();
  const Grid& g = I.grid();
  const Eigen::ArrayXd source = emission(theta).values();
  const Eigen::ArrayXd avg = angular_average(I);
  const double scatter = c.sigma_s * ords.sphere_measure();

  Eigen::ArrayXXd out(g.size(), ords.size());
  for (int a = 0; a < ords.size(); ++a) {
    const SpectralField Ia = I.ordinate(a);
    const VectorField gradI = grad(Ia);
    Eigen::ArrayXd streaming = Eigen::ArrayXd::Zero(g.size());
    for (int j = 0; j < g.dims(); ++j) streaming += ords.directions[a][j] * gradI[j].values();
    out.col(a) = (-streaming + source - c.sigma_a * Ia.values() + scatter * (avg - Ia.values())) / c.eps;
  }
  return KineticField(g, ords, std::move(out));
}

RadiationMoments moments(const KineticField& I) {
  const auto& ords = I.ordinates();
  const Grid& g = I.grid();
  const double measure = ords.sphere_measure();
  SpectralField I0(g, angular_average(I));
  VectorField I1(g);
  for (int j = 0; j < g.dims(); ++j) {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(g.size());
    for (int a = 0; a < ords.size(); ++a) acc += ords.weights[a] * ords.directions[a][j] * I.intensity().col(a);
    I1[j] = SpectralField(g, acc * (g.dims() / measure));
  }
  return {std::move(I0), std::move(I1)};
}

double p1_projection_residual(const KineticField& I) {
  const KineticField p1 = KineticField::from_moments(moments(I), I.ordinates());
  const auto& w = I.ordinates().weights;
  double sum = 0.0;
  for (int a = 0; a < I.ordinates().size(); ++a) {
    sum += w[a] * (I.intensity().col(a) - p1.intensity().col(a)).square().sum();
  }
  return std::sqrt(sum * I.grid().volume() / double(I.grid().size()));
}

RadiationTendency p1_moment_rhs(const RadiationMoments& m, const SpectralField& theta, const OrdinateSet& ords,
                                const KineticCoefficients& c) {
  c.validate();
  const double n = m.grid().dims();
  SpectralField d_I0 = (emission(theta) - c.sigma_a * m.I0 - div(m.I1) / n) / c.eps;
  const double damping = c.sigma_a + c.sigma_s * ords.sphere_measure();
  VectorField d_I1 = grad(m.I0);
  for (int j = 0; j < d_I1.dims(); ++j) d_I1[j] = (-d_I1[j] - damping * m.I1[j]) / c.eps;
  return {std::move(d_I0), std::move(d_I1)};
}

MomentResiduals moment_system_defect(const KineticField& I, const SpectralField& theta, const KineticCoefficients& c) {
  const RadiationMoments kinetic = moments(kinetic_rhs(I, theta, c));
  const RadiationTendency p1 = p1_moment_rhs(moments(I), theta, I.ordinates(), c);
  return {sobolev_norm(kinetic.I0 - p1.d_I0, 0), sobolev_norm(kinetic.I1 - p1.d_I1, 0)};
}

MomentResiduals moment_system_check(const KineticField& I, const SpectralField& theta, const KineticCoefficients& c) {
  const double off = p1_projection_residual(I);
  if (off > kClosureManifoldTolerance) {
    throw OffClosureManifold("moment_system_check: intensity is not a P1 field (projection residual " +
                             std::to_string(off) + ")");
  }
  return moment_system_defect(I, theta, c);
}

KineticField step_kinetic(const KineticField& I, const SpectralField& theta, const KineticCoefficients& c, double dt) {
  const auto stage = [&](const Eigen::ArrayXXd& base, const KineticField& slope, double h) {
    return KineticField(I.grid(), I.ordinates(), base + h * slope.intensity());
  };
  const KineticField k1 = kinetic_rhs(I, theta, c);
  const KineticField k2 = kinetic_rhs(stage(I.intensity(), k1, 0.5 * dt), theta, c);
  const KineticField k3 = kinetic_rhs(stage(I.intensity(), k2, 0.5 * dt), theta, c);
  const KineticField k4 = kinetic_rhs(stage(I.intensity(), k3, dt), theta, c);
  Eigen::ArrayXXd next =
      I.intensity() + (dt / 6.0) * (k1.intensity() + 2.0 * k2.intensity() + 2.0 * k3.intensity() + k4.intensity());
  return KineticField(I.grid(), I.ordinates(), std::move(next));
}

}  // namespace radhydro
