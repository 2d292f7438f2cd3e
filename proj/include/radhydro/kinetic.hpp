#pragma once

// Discrete-ordinates gray transport
//   eps dI/dt + omega . grad I = theta^4 - sigma_a I + sigma_s |S| (<<I>> - I)
// and its angular moments. <<.>> is the average over the unit sphere S^{n-1}.
//
// With I = I0 + I1 . omega the moments obey
//   eps dI0/dt + (1/n) div I1 = theta^4 - sigma_a I0
//   eps dI1/dt + grad I0      = -(sigma_a + sigma_s |S|) I1
// For n = 1, sigma_a = 1 and sigma_s = 0 this is exactly the P1 system of
// radiation.hpp; for n = 2 that system additionally absorbs the 1/n factor
// on div I1 (rescale x by sqrt(n) and I1 by 1/sqrt(n)).

#include <vector>

#include <Eigen/Core>

#include "radhydro/radiation.hpp"
#include "radhydro/spectral.hpp"

namespace radhydro {

struct OrdinateSet {
  int n_dims = 1;
  std::vector<Eigen::Vector2d> directions;  // second entry unused when n_dims == 1
  std::vector<double> weights;

  int size() const { return int(weights.size()); }
  /// |S^{n-1}|: 2 for n = 1, 2 pi for n = 2.
  double sphere_measure() const;
};

/// n = 1: the two directions +-1 with unit weights (`count` is ignored).
/// n = 2: `count` equispaced angles with weights 2 pi / count; count must be even and >= 4.
OrdinateSet make_ordinates(int n_dims, int count);

struct KineticCoefficients {
  double eps = 1.0;
  double sigma_a = 1.0;
  double sigma_s = 0.0;

  void validate() const;
};

/// Intensity on grid x ordinates; column a holds direction a.
class KineticField {
 public:
  KineticField(const Grid& grid, OrdinateSet ordinates);
  KineticField(const Grid& grid, OrdinateSet ordinates, Eigen::ArrayXXd intensity);

  /// I0 + I1 . omega at every ordinate.
  static KineticField from_moments(const RadiationMoments& m, const OrdinateSet& ordinates);

  const Grid& grid() const { return grid_; }
  const OrdinateSet& ordinates() const { return ordinates_; }
  const Eigen::ArrayXXd& intensity() const { return intensity_; }
  Eigen::ArrayXXd& intensity() { return intensity_; }
  SpectralField ordinate(int a) const { return SpectralField(grid_, intensity_.col(a)); }

 private:
  Grid grid_;
  OrdinateSet ordinates_;
  Eigen::ArrayXXd intensity_;
};

KineticField kinetic_rhs(const KineticField& I, const SpectralField& theta, const KineticCoefficients& c);

/// I0 = <<I>>, I1 = n <<omega I>>: the L^2(d omega) projection onto span{1, omega}.
RadiationMoments moments(const KineticField& I);

/// Weighted L^2(grid x sphere) norm of I minus its P1 projection.
double p1_projection_residual(const KineticField& I);

/// Right-hand sides of the moment equations above, divided by eps.
RadiationTendency p1_moment_rhs(const RadiationMoments& m, const SpectralField& theta, const OrdinateSet& ords,
                                const KineticCoefficients& c);

struct MomentResiduals {
  double r0 = 0.0;
  double r1 = 0.0;
};

/// L^2 distance between the moments of kinetic_rhs(I) and p1_moment_rhs(moments(I)).
MomentResiduals moment_system_defect(const KineticField& I, const SpectralField& theta, const KineticCoefficients& c);

/// As moment_system_defect, but throws OffClosureManifold when I is not (numerically) a P1 field.
MomentResiduals moment_system_check(const KineticField& I, const SpectralField& theta, const KineticCoefficients& c);

inline constexpr double kClosureManifoldTolerance = 1e-8;

/// One explicit RK4 step of the transport equation.
KineticField step_kinetic(const KineticField& I, const SpectralField& theta, const KineticCoefficients& c, double dt);

}  // namespace radhydro
