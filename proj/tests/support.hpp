#pragma once

#include <cmath>
#include <random>

#include "radhydro/spectral.hpp"

namespace radhydro::testing {

/// Random trigonometric polynomial with |k_j| <= max_mode and coefficients in [-1, 1].
inline SpectralField random_smooth(const Grid& g, std::mt19937& rng, int max_mode = 4, double offset = 0.0) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  SpectralField f = SpectralField::constant(g, offset);
  const int ky_max = g.dims() == 2 ? max_mode : 0;
  for (int kx = 0; kx <= max_mode; ++kx) {
    for (int ky = -ky_max; ky <= ky_max; ++ky) {
      const double a = coeff(rng) / (1 + kx * kx + ky * ky);
      const double b = coeff(rng) / (1 + kx * kx + ky * ky);
      f += SpectralField::from_function(g, [&](const auto& x) {
        const double phase = kx * x[0] + ky * x[1];
        return a * std::cos(phase) + b * std::sin(phase);
      });
    }
  }
  return f;
}

inline VectorField random_smooth_vector(const Grid& g, std::mt19937& rng, int max_mode = 4) {
  std::vector<SpectralField> comps;
  for (int d = 0; d < g.dims(); ++d) comps.push_back(random_smooth(g, rng, max_mode));
  return VectorField(std::move(comps));
}

inline double max_abs(const SpectralField& f) { return f.values().abs().maxCoeff(); }
inline double max_abs(const VectorField& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, max_abs(c));
  return m;
}
inline double max_abs_diff(const SpectralField& a, const SpectralField& b) { return (a.values() - b.values()).abs().maxCoeff(); }
inline double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int j = 0; j < a.dims(); ++j) m = std::max(m, max_abs_diff(a[j], b[j]));
  return m;
}

/// Shifts a field by `cells` grid cells along x_1.
inline SpectralField shift_x(const SpectralField& f, int cells) {
  const Grid& g = f.grid();
  const int n = g.points();
  SpectralField out(g);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const int i0 = g.node(i, 0);
    const Eigen::Index row = i - i0;
    out[row + (i0 + cells) % n] = f[i];
  }
  return out;
}

inline VectorField shift_x(const VectorField& v, int cells) {
  std::vector<SpectralField> comps;
  for (const auto& c : v) comps.push_back(shift_x(c, cells));
  return VectorField(std::move(comps));
}

}  // namespace radhydro::testing
