#include <doctest.h>

#include <cmath>
#include <random>

#include "radhydro/spectral.hpp"
#include "support.hpp"

using namespace radhydro;
using namespace radhydro::testing;

namespace {

SpectralField analytic(const Grid& g, double (*fn)(double, double)) {
  return SpectralField::from_function(g, [&](const auto& x) { return fn(x[0], x[1]); });
}

// 8th-order centered difference along x_1 or x_2, the independent derivative oracle.
SpectralField finite_difference(const SpectralField& f, int dim) {
  const Grid& g = f.grid();
  const int n = g.points();
  const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  SpectralField out(g);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const int i0 = g.node(i, 0), i1 = g.node(i, 1);
    double acc = 0.0;
    for (int m = 1; m <= 4; ++m) {
      auto at = [&](int shift) {
        const int j0 = dim == 0 ? (i0 + shift + n) % n : i0;
        const int j1 = dim == 1 ? (i1 + shift + n) % n : i1;
        return f[j0 + Eigen::Index(n) * j1];
      };
      acc += c[m - 1] * (at(m) - at(-m));
    }
    out[i] = acc / g.spacing();
  }
  return out;
}

}  // namespace

TEST_CASE("grid rejects unsupported shapes") {
  CHECK_THROWS_AS(Grid(3, 16), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, 48), std::invalid_argument);
  CHECK_NOTHROW(Grid(2, 8));
  CHECK(Grid(2, 16).size() == 256);
}

TEST_CASE("transform round trip and conjugate symmetry") {
  std::mt19937 rng(7);
  for (int dims : {1, 2}) {
    for (int n : {8, 16, 32, 64, 128}) {
      if (dims == 2 && n > 64) continue;
      const Grid g(dims, n);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      RealArray<double> v(g.size());
      for (auto& x : v) x = u(rng);
      const SpectralField f(g, v);
      const Spectrum fhat = forward(f);
      const SpectralField back = inverse(fhat);
      CHECK(max_abs_diff(back, f) <= 1e-12 * max_abs(f));
      CHECK(std::abs(fhat.coeffs[0] - f.mean()) < 1e-14);

      // fhat(-k) = conj(fhat(k))
      double asym = 0.0;
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        Eigen::Index mirror = 0;
        for (int d = 0; d < dims; ++d) {
          const int m = (n - g.node(i, d)) % n;
          mirror += d == 0 ? m : Eigen::Index(n) * m;
        }
        asym = std::max(asym, std::abs(fhat.coeffs[i] - std::conj(fhat.coeffs[mirror])));
      }
      CHECK(asym < 1e-14);
    }
  }
}

TEST_CASE("grad examples") {
  const Grid g1(1, 32);
  const VectorField d = grad(analytic(g1, [](double x, double) { return std::sin(x); }));
  CHECK(max_abs_diff(d[0], analytic(g1, [](double x, double) { return std::cos(x); })) < 1e-13);
  CHECK(max_abs(grad(SpectralField::constant(g1, 3.5))[0]) < 1e-14);

  const Grid g2(2, 64);
  const SpectralField f = analytic(g2, [](double x, double y) { return std::sin(2 * x) * std::cos(3 * y); });
  const VectorField gf = grad(f);
  for (int d = 0; d < 2; ++d) {
    CHECK(max_abs_diff(gf[d], finite_difference(f, d)) < 1e-6);
  }
}

TEST_CASE("div examples") {
  const Grid g1(1, 32);
  const VectorField v({analytic(g1, [](double x, double) { return std::sin(x); })});
  CHECK(max_abs_diff(div(v), analytic(g1, [](double x, double) { return std::cos(x); })) < 1e-13);

  const SpectralField f = analytic(g1, [](double x, double) { return std::cos(x); });
  CHECK(max_abs_diff(div(grad(f)), -f) < 1e-13);
  CHECK(max_abs_diff(div(grad(f)), laplacian(f)) < 1e-13);

  std::mt19937 rng(3);
  const Grid g2(2, 32);
  const SpectralField one = SpectralField::constant(g2, 1.0);
  CHECK(std::abs(inner(div(random_smooth_vector(g2, rng)), one)) < 1e-12);
}

TEST_CASE("laplacian and Helmholtz symbols") {
  const Grid g(1, 32);
  const SpectralField s = analytic(g, [](double x, double) { return std::sin(x); });
  const SpectralField c2 = analytic(g, [](double x, double) { return std::cos(2 * x); });
  const SpectralField c1 = analytic(g, [](double x, double) { return std::cos(x); });
  CHECK(max_abs_diff(laplacian(s), -s) < 1e-13);
  CHECK(max_abs(laplacian(SpectralField::constant(g, 2.0))) < 1e-14);
  CHECK(max_abs_diff(laplacian(c2), -4.0 * c2) < 1e-12);

  CHECK(max_abs_diff(helmholtz_inverse(SpectralField::constant(g, 2.5)), SpectralField::constant(g, 2.5)) < 1e-14);
  CHECK(max_abs_diff(helmholtz_inverse(c1), 0.5 * c1) < 1e-14);
}

TEST_CASE("sobolev norm examples") {
  const Grid g(1, 64);
  CHECK(sobolev_norm(SpectralField::constant(g, -2.0), 4) == doctest::Approx(2.0 * std::sqrt(2 * M_PI)).epsilon(1e-13));
  const Grid g2(2, 16);
  CHECK(sobolev_norm(SpectralField::constant(g2, 3.0), 2) == doctest::Approx(3.0 * 2 * M_PI).epsilon(1e-13));

  const SpectralField s = analytic(g, [](double x, double) { return std::sin(x); });
  CHECK(sobolev_norm(s, 0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));

  // Quadrature oracle for ||sin||_1^2 = int (f^2 + f'^2) dx, sampled on a finer midpoint rule.
  double quad = 0.0;
  const int m = 4096;
  for (int i = 0; i < m; ++i) {
    const double x = (i + 0.5) * 2 * M_PI / m;
    quad += (std::sin(x) * std::sin(x) + std::cos(x) * std::cos(x)) * 2 * M_PI / m;
  }
  CHECK(sobolev_norm_squared(s, 1) == doctest::Approx(quad).epsilon(1e-12));
  CHECK(sobolev_norm_squared(s, 1) == doctest::Approx(2.0 * sobolev_norm_squared(s, 0)).epsilon(1e-13));

  CHECK_THROWS_AS(sobolev_norm(s, 7), std::invalid_argument);
}

TEST_CASE("dealias examples") {
  const Grid g(1, 64);
  std::mt19937 rng(11);
  const SpectralField low = random_smooth(g, rng, g.points() / 3);
  CHECK(max_abs_diff(dealias(low), low) < 1e-13);

  const SpectralField nyquist = SpectralField::from_function(g, [&](const auto& x) { return std::cos(32 * x[0]); });
  CHECK(max_abs(dealias(nyquist)) < 1e-14);

  RealArray<double> noise = RealArray<double>::Random(g.size());
  const SpectralField f(g, noise);
  CHECK(max_abs_diff(dealias(dealias(f)), dealias(f)) < 1e-14);
}

TEST_CASE("operator identities on random smooth data") {
  for (int dims : {1, 2}) {
    for (int n : {32, 64}) {
      const Grid g(dims, n);
      for (unsigned seed = 0; seed < 5; ++seed) {
        std::mt19937 rng(seed);
        const SpectralField f = random_smooth(g, rng);
        const VectorField v = random_smooth_vector(g, rng);
        const double scale = std::sqrt(sobolev_norm_squared(f, 1) * sobolev_norm_squared(v, 1));

        CHECK(std::abs(inner(grad(f), v) + inner(f, div(v))) < 1e-10 * std::max(1.0, scale));
        CHECK(max_abs_diff(div(grad(f)), laplacian(f)) < 1e-12 * std::max(1.0, max_abs(laplacian(f))));
        CHECK(max_abs_diff(helmholtz_inverse(helmholtz(f)), f) < 1e-12 * std::max(1.0, max_abs(f)));
        for (int s = 0; s < 6; ++s) {
          CHECK(sobolev_norm(f, s) <= sobolev_norm(f, s + 1));
        }
      }
    }
  }
}

TEST_CASE("spectral derivative converges faster than any fixed order") {
  auto error = [](int n) {
    const Grid g(1, n);
    const SpectralField f = SpectralField::from_function(g, [](const auto& x) { return std::exp(std::sin(x[0])); });
    const SpectralField exact =
        SpectralField::from_function(g, [](const auto& x) { return std::cos(x[0]) * std::exp(std::sin(x[0])); });
    return max_abs_diff(grad(f)[0], exact);
  };
  const double e32 = error(32);
  const double e64 = error(64);
  // An order-p method gains 2^p per halving; demand more than p = 16.
  CHECK(e32 < 1e-9);
  CHECK(e64 < std::max(e32 / 65536.0, 1e-13));
}
