#include <doctest.h>

#include <cmath>
#include <random>

#include "radhydro/radiation.hpp"
#include "support.hpp"

using namespace radhydro;
using namespace radhydro::testing;

namespace {

SpectralField fn1(const Grid& g, double (*fn)(double)) {
  return SpectralField::from_function(g, [&](const auto& x) { return fn(x[0]); });
}

SpectralField positive_theta(const Grid& g, std::mt19937& rng) {
  return random_smooth(g, rng, 3) * 0.1 + SpectralField::constant(g, 1.0);
}

}  // namespace

TEST_CASE("radiation_rhs examples") {
  const Grid g(1, 64);
  const SpectralField one = SpectralField::constant(g, 1.0);

  const RadiationTendency eq = radiation_rhs({one, VectorField(g)}, one, 0.3);
  CHECK(max_abs(eq.d_I0) < 1e-14);
  CHECK(max_abs(eq.d_I1[0]) < 1e-14);

  const RadiationMoments bumped{fn1(g, [](double x) { return 1.0 + std::cos(x); }), VectorField(g)};
  const RadiationTendency t = radiation_rhs(bumped, one, 1.0);
  CHECK(max_abs_diff(t.d_I0, fn1(g, [](double x) { return -std::cos(x); })) < 1e-13);
  CHECK(max_abs_diff(t.d_I1[0], fn1(g, [](double x) { return std::sin(x); })) < 1e-13);

  const SpectralField theta = fn1(g, [](double x) { return 1.0 + 0.1 * std::cos(x); });
  for (double eps : {1.0, 0.05, 1e-4}) {
    const RadiationTendency s = radiation_rhs(limit_moments(theta), theta, eps);
    CHECK(max_abs(s.d_I0) * eps < 1e-12);
    CHECK(max_abs(s.d_I0) < 1e-10 / eps);
    CHECK(max_abs(s.d_I1[0]) < 1e-10 / eps);
  }
  CHECK_THROWS_AS(radiation_rhs(bumped, one, 0.0), std::invalid_argument);
}

TEST_CASE("limit_I0 examples") {
  const Grid g(1, 64);
  CHECK(max_abs_diff(limit_I0(SpectralField::constant(g, 1.0)), SpectralField::constant(g, 1.0)) < 1e-14);

  const SpectralField source = fn1(g, [](double x) { return 1.0 + std::cos(x); });
  CHECK(max_abs_diff(equilibrium_intensity(source), fn1(g, [](double x) { return 1.0 + 0.5 * std::cos(x); })) < 1e-14);

  const SpectralField theta = fn1(g, [](double x) { return 1.0 + 0.1 * std::cos(x); });
  const SpectralField I0 = limit_I0(theta);
  const SpectralField th4 = SpectralField(g, theta.values().pow(4));
  CHECK(I0.mean() == doctest::Approx(th4.mean()).epsilon(1e-14));
  CHECK(sobolev_norm(helmholtz(I0) - th4, 0) < 1e-12);
}

TEST_CASE("limit_q examples") {
  const Grid g(1, 64);
  CHECK(max_abs(limit_q(SpectralField::constant(g, 1.3))[0]) < 1e-14);

  const SpectralField source = fn1(g, [](double x) { return 1.0 + std::cos(x); });
  const VectorField q = -grad(equilibrium_intensity(source));
  CHECK(max_abs_diff(q[0], fn1(g, [](double x) { return 0.5 * std::sin(x); })) < 1e-14);

  // Curl-free in 2D, and equal to the (-Delta/(I-Delta) - I) grad theta^4 form.
  const Grid g2(2, 32);
  for (unsigned seed = 0; seed < 5; ++seed) {
    std::mt19937 rng(seed);
    const SpectralField theta = positive_theta(g2, rng);
    const VectorField q2 = limit_q(theta);
    CHECK(max_abs(partial(q2[1], 0) - partial(q2[0], 1)) < 1e-12);

    const VectorField grad_th4 = grad(emission(theta));
    for (int j = 0; j < 2; ++j) {
      const SpectralField alt = -laplacian(helmholtz_inverse(grad_th4[j])) - grad_th4[j];
      CHECK(max_abs_diff(alt, q2[j]) < 1e-12);
    }
  }
}

TEST_CASE("limit_closure_residual examples") {
  for (int dims : {1, 2}) {
    const Grid g(dims, 32);
    std::mt19937 rng(dims);
    const SpectralField theta = positive_theta(g, rng);
    const VectorField q = limit_q(theta);
    CHECK(limit_closure_residual(theta, q) < 1e-11);
    CHECK(limit_closure_residual(theta, VectorField(g)) ==
          doctest::Approx(sobolev_norm(grad(emission(theta)), 0)).epsilon(1e-12));

    // The residual operator is linear: perturbing q by p adds exactly the residual of p.
    VectorField p(g);
    p[0] = SpectralField::from_function(g, [](const auto& x) { return 0.01 * std::sin(x[0]); });
    const double oracle = sobolev_norm(p - grad(div(p)), 0);
    CHECK(std::abs(limit_closure_residual(theta, q + p) - oracle) < 1e-6);
  }
  CHECK(limit_closure_residual(SpectralField::constant(Grid(1, 16), 2.0), VectorField(Grid(1, 16))) < 1e-13);
}

TEST_CASE("radiation invariants") {
  for (int dims : {1, 2}) {
    const Grid g(dims, 32);
    for (unsigned seed = 0; seed < 5; ++seed) {
      std::mt19937 rng(40 + seed);
      const SpectralField theta = positive_theta(g, rng);
      const RadiationMoments rad{random_smooth(g, rng) + SpectralField::constant(g, 1.0), random_smooth_vector(g, rng)};

      // Tendencies scale exactly as 1/eps.
      const RadiationTendency a = radiation_rhs(rad, theta, 0.1);
      const RadiationTendency b = radiation_rhs(rad, theta, 0.2);
      CHECK(((a.d_I0.values() - 2.0 * b.d_I0.values()).abs().maxCoeff()) == 0.0);
      for (int j = 0; j < dims; ++j) CHECK(((a.d_I1[j].values() - 2.0 * b.d_I1[j].values()).abs().maxCoeff()) == 0.0);

      const RadiationTendency steady = radiation_rhs(limit_moments(theta), theta, 0.013);
      CHECK(max_abs(steady.d_I0) < 1e-10);
      CHECK(max_abs(steady.d_I1[0]) < 1e-10);

      CHECK(limit_I0(theta).mean() == doctest::Approx(emission(theta).mean()).epsilon(1e-14));
    }
  }
}
