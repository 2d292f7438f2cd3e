#pragma once

// Fourier pseudo-spectral substrate on the periodic box [0, 2*pi)^n, n = 1 or 2.
//
// Conventions:
//   * node j of dimension d sits at x_d = j * 2*pi / N; flat index = i0 + N * i1
//     (x_1 runs fastest).
//   * forward transform divides by the total point count, so the k = 0
//     coefficient is the field mean and f(x) = sum_k fhat(k) exp(i k.x).
//   * odd-order derivative symbols drop the Nyquist wavenumber; even-order
//     symbols keep it as N/2.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace radhydro {

class Grid {
 public:
  Grid(int n_dims, int points_per_dim) : dims_(n_dims), points_(points_per_dim) {
    if (n_dims != 1 && n_dims != 2) {
      throw std::invalid_argument("Grid: n_dims must be 1 or 2");
    }
    if (points_per_dim < 8 || (points_per_dim & (points_per_dim - 1)) != 0) {
      throw std::invalid_argument("Grid: points_per_dim must be a power of two >= 8");
    }
  }

  int dims() const { return dims_; }
  int points() const { return points_; }
  Eigen::Index size() const { return dims_ == 1 ? points_ : Eigen::Index(points_) * points_; }
  double spacing() const { return 2.0 * M_PI / points_; }
  double volume() const { return std::pow(2.0 * M_PI, dims_); }

  /// Index of `flat` along dimension `dim`.
  int node(Eigen::Index flat, int dim) const {
    return dim == 0 ? int(flat % points_) : int(flat / points_);
  }
  double coordinate(Eigen::Index flat, int dim) const { return node(flat, dim) * spacing(); }

  /// Signed wavenumber of FFT slot m, in [-N/2, N/2).
  int wavenumber(int m) const { return m < points_ / 2 ? m : m - points_; }
  /// Wavenumber used by first-derivative symbols (Nyquist mapped to zero).
  int derivative_wavenumber(int m) const { return m == points_ / 2 ? 0 : wavenumber(m); }

  double wavenumber_squared(Eigen::Index flat) const {
    double k2 = 0.0;
    for (int d = 0; d < dims_; ++d) {
      const double k = wavenumber(node(flat, d));
      k2 += k * k;
    }
    return k2;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dims_;
  int points_;
};

template <typename Scalar>
using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using ComplexArray = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Real scalar field sampled at the grid nodes.
///
/// Fourier coefficients are produced on demand by `forward()`; the field
/// itself holds no transform cache, so const instances are safe to share
/// across threads.
template <typename Scalar>
class BasicSpectralField {
 public:
  explicit BasicSpectralField(const Grid& grid) : grid_(grid), values_(RealArray<Scalar>::Zero(grid.size())) {}

  template <typename Derived>
  BasicSpectralField(const Grid& grid, const Eigen::ArrayBase<Derived>& values) : grid_(grid), values_(values) {
    if (values_.size() != grid_.size()) {
      throw std::invalid_argument("SpectralField: value count does not match grid");
    }
  }

  static BasicSpectralField constant(const Grid& grid, Scalar c) {
    return BasicSpectralField(grid, RealArray<Scalar>::Constant(grid.size(), c));
  }

  /// Samples `fn(x)` at every node; `x` is a std::array-like of coordinates.
  template <typename Fn>
  static BasicSpectralField from_function(const Grid& grid, Fn&& fn) {
    RealArray<Scalar> v(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      std::array<double, 2> x{grid.coordinate(i, 0), grid.dims() > 1 ? grid.coordinate(i, 1) : 0.0};
      v[i] = Scalar(fn(x));
    }
    return BasicSpectralField(grid, v);
  }

  const Grid& grid() const { return grid_; }
  const RealArray<Scalar>& values() const { return values_; }
  RealArray<Scalar>& values() { return values_; }
  Scalar operator[](Eigen::Index i) const { return values_[i]; }
  Scalar& operator[](Eigen::Index i) { return values_[i]; }

  Scalar mean() const { return values_.mean(); }
  Scalar min() const { return values_.minCoeff(); }
  Scalar max() const { return values_.maxCoeff(); }
  bool all_finite() const { return values_.allFinite(); }

  BasicSpectralField& operator+=(const BasicSpectralField& o) { values_ += o.values_; return *this; }
  BasicSpectralField& operator-=(const BasicSpectralField& o) { values_ -= o.values_; return *this; }
  BasicSpectralField& operator*=(Scalar c) { values_ *= c; return *this; }

  friend BasicSpectralField operator+(BasicSpectralField a, const BasicSpectralField& b) { return a += b; }
  friend BasicSpectralField operator-(BasicSpectralField a, const BasicSpectralField& b) { return a -= b; }
  friend BasicSpectralField operator-(BasicSpectralField a) { a.values_ = -a.values_; return a; }
  friend BasicSpectralField operator*(Scalar c, BasicSpectralField a) { return a *= c; }
  friend BasicSpectralField operator*(BasicSpectralField a, Scalar c) { return a *= c; }
  friend BasicSpectralField operator/(BasicSpectralField a, Scalar c) { a.values_ /= c; return a; }
  /// Pointwise product in physical space (not dealiased).
  friend BasicSpectralField operator*(BasicSpectralField a, const BasicSpectralField& b) {
    a.values_ *= b.values_;
    return a;
  }
  /// Pointwise quotient in physical space.
  friend BasicSpectralField operator/(BasicSpectralField a, const BasicSpectralField& b) {
    a.values_ /= b.values_;
    return a;
  }

 private:
  Grid grid_;
  RealArray<Scalar> values_;
};

/// Fourier coefficients of a real field, in FFT slot order.
template <typename Scalar>
struct BasicSpectrum {
  Grid grid;
  ComplexArray<Scalar> coeffs;
};

/// n_dims scalar components on one grid.
template <typename Scalar>
class BasicVectorField {
 public:
  explicit BasicVectorField(const Grid& grid) : components_(grid.dims(), BasicSpectralField<Scalar>(grid)) {}
  explicit BasicVectorField(std::vector<BasicSpectralField<Scalar>> components) : components_(std::move(components)) {
    if (components_.empty()) {
      throw std::invalid_argument("VectorField: no components");
    }
    const Grid& g = components_.front().grid();
    if (int(components_.size()) != g.dims()) {
      throw std::invalid_argument("VectorField: component count must equal n_dims");
    }
    for (const auto& c : components_) {
      if (!(c.grid() == g)) {
        throw std::invalid_argument("VectorField: components on different grids");
      }
    }
  }

  const Grid& grid() const { return components_.front().grid(); }
  int dims() const { return int(components_.size()); }
  const BasicSpectralField<Scalar>& operator[](int j) const { return components_[j]; }
  BasicSpectralField<Scalar>& operator[](int j) { return components_[j]; }
  auto begin() const { return components_.begin(); }
  auto end() const { return components_.end(); }

  bool all_finite() const {
    for (const auto& c : components_) {
      if (!c.all_finite()) return false;
    }
    return true;
  }

  BasicVectorField& operator+=(const BasicVectorField& o) {
    for (int j = 0; j < dims(); ++j) components_[j] += o.components_[j];
    return *this;
  }
  BasicVectorField& operator-=(const BasicVectorField& o) {
    for (int j = 0; j < dims(); ++j) components_[j] -= o.components_[j];
    return *this;
  }
  BasicVectorField& operator*=(Scalar c) {
    for (auto& comp : components_) comp *= c;
    return *this;
  }
  friend BasicVectorField operator+(BasicVectorField a, const BasicVectorField& b) { return a += b; }
  friend BasicVectorField operator-(BasicVectorField a, const BasicVectorField& b) { return a -= b; }
  friend BasicVectorField operator-(BasicVectorField a) { return a *= Scalar(-1); }
  friend BasicVectorField operator*(Scalar c, BasicVectorField a) { return a *= c; }
  friend BasicVectorField operator*(BasicVectorField a, Scalar c) { return a *= c; }

 private:
  std::vector<BasicSpectralField<Scalar>> components_;
};

using SpectralField = BasicSpectralField<double>;
using VectorField = BasicVectorField<double>;
using Spectrum = BasicSpectrum<double>;

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  // kissfft twiddle caches are not synchronized; one engine per thread.
  thread_local Eigen::FFT<Scalar> engine = [] {
    Eigen::FFT<Scalar> e;
    e.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    return e;
  }();
  return engine;
}

// Transforms `data` in place along every dimension. sign < 0 is forward.
template <typename Scalar>
void transform_in_place(const Grid& grid, ComplexArray<Scalar>& data, int sign) {
  auto& fft = fft_engine<Scalar>();
  const int n = grid.points();
  std::vector<std::complex<Scalar>> in(n), out(n);
  const Eigen::Index lines = grid.size() / n;
  for (int dim = 0; dim < grid.dims(); ++dim) {
    const Eigen::Index stride = dim == 0 ? 1 : n;
    for (Eigen::Index line = 0; line < lines; ++line) {
      const Eigen::Index base = dim == 0 ? line * n : line;
      for (int j = 0; j < n; ++j) in[j] = data[base + j * stride];
      if (sign < 0) {
        fft.fwd(out, in);
      } else {
        fft.inv(out, in);
      }
      for (int j = 0; j < n; ++j) data[base + j * stride] = out[j];
    }
  }
}

}  // namespace detail

template <typename Scalar>
BasicSpectrum<Scalar> forward(const BasicSpectralField<Scalar>& f) {
  ComplexArray<Scalar> data = f.values().template cast<std::complex<Scalar>>();
  detail::transform_in_place(f.grid(), data, -1);
  data /= Scalar(f.grid().size());
  return {f.grid(), std::move(data)};
}

/// Real part of the synthesis sum; conjugate-symmetric input gives an exact real field.
template <typename Scalar>
BasicSpectralField<Scalar> inverse(const BasicSpectrum<Scalar>& s) {
  ComplexArray<Scalar> data = s.coeffs;
  detail::transform_in_place(s.grid, data, +1);
  return BasicSpectralField<Scalar>(s.grid, data.real());
}

/// Multiplies every coefficient by symbol(flat_index).
template <typename Scalar, typename Symbol>
BasicSpectrum<Scalar> apply_symbol(BasicSpectrum<Scalar> s, Symbol&& symbol) {
  for (Eigen::Index i = 0; i < s.coeffs.size(); ++i) s.coeffs[i] *= symbol(i);
  return s;
}

template <typename Scalar>
BasicSpectralField<Scalar> partial(const BasicSpectralField<Scalar>& f, int dim) {
  const Grid& g = f.grid();
  return inverse(apply_symbol(forward(f), [&](Eigen::Index i) {
    return std::complex<Scalar>(0, g.derivative_wavenumber(g.node(i, dim)));
  }));
}

template <typename Scalar>
BasicVectorField<Scalar> grad(const BasicSpectralField<Scalar>& f) {
  const Grid& g = f.grid();
  const auto fhat = forward(f);
  std::vector<BasicSpectralField<Scalar>> comps;
  for (int d = 0; d < g.dims(); ++d) {
    comps.push_back(inverse(apply_symbol(fhat, [&](Eigen::Index i) {
      return std::complex<Scalar>(0, g.derivative_wavenumber(g.node(i, d)));
    })));
  }
  return BasicVectorField<Scalar>(std::move(comps));
}

template <typename Scalar>
BasicSpectralField<Scalar> div(const BasicVectorField<Scalar>& v) {
  const Grid& g = v.grid();
  ComplexArray<Scalar> acc = ComplexArray<Scalar>::Zero(g.size());
  for (int d = 0; d < g.dims(); ++d) {
    const auto vhat = forward(v[d]);
    for (Eigen::Index i = 0; i < acc.size(); ++i) {
      acc[i] += std::complex<Scalar>(0, g.derivative_wavenumber(g.node(i, d))) * vhat.coeffs[i];
    }
  }
  return inverse(BasicSpectrum<Scalar>{g, std::move(acc)});
}

template <typename Scalar>
BasicSpectralField<Scalar> laplacian(const BasicSpectralField<Scalar>& f) {
  const Grid& g = f.grid();
  return inverse(apply_symbol(forward(f), [&](Eigen::Index i) { return Scalar(-g.wavenumber_squared(i)); }));
}

/// (I - Laplacian) f.
template <typename Scalar>
BasicSpectralField<Scalar> helmholtz(const BasicSpectralField<Scalar>& f) {
  const Grid& g = f.grid();
  return inverse(apply_symbol(forward(f), [&](Eigen::Index i) { return Scalar(1.0 + g.wavenumber_squared(i)); }));
}

/// (I - Laplacian)^{-1} f, exact on the grid.
template <typename Scalar>
BasicSpectralField<Scalar> helmholtz_inverse(const BasicSpectralField<Scalar>& f) {
  const Grid& g = f.grid();
  return inverse(apply_symbol(forward(f), [&](Eigen::Index i) { return Scalar(1.0 / (1.0 + g.wavenumber_squared(i))); }));
}

/// 2/3-rule truncation: zeroes every mode with some |k_j| > N/3. Idempotent.
template <typename Scalar>
BasicSpectralField<Scalar> dealias(const BasicSpectralField<Scalar>& f) {
  const Grid& g = f.grid();
  const int cutoff = g.points() / 3;
  return inverse(apply_symbol(forward(f), [&](Eigen::Index i) {
    for (int d = 0; d < g.dims(); ++d) {
      if (std::abs(g.wavenumber(g.node(i, d))) > cutoff) return Scalar(0);
    }
    return Scalar(1);
  }));
}

/// Squared H^s norm, full-integral convention: sum_k (1+|k|^2)^s |fhat|^2 (2 pi)^n.
template <typename Scalar>
Scalar sobolev_norm_squared(const BasicSpectralField<Scalar>& f, int s) {
  if (s < 0 || s > 6) {
    throw std::invalid_argument("sobolev_norm: index must lie in [0, 6]");
  }
  const Grid& g = f.grid();
  const auto fhat = forward(f);
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < fhat.coeffs.size(); ++i) {
    sum += std::pow(Scalar(1.0 + g.wavenumber_squared(i)), s) * std::norm(fhat.coeffs[i]);
  }
  return sum * Scalar(g.volume());
}

template <typename Scalar>
Scalar sobolev_norm_squared(const BasicVectorField<Scalar>& v, int s) {
  Scalar sum = 0;
  for (const auto& c : v) sum += sobolev_norm_squared(c, s);
  return sum;
}

template <typename Scalar>
Scalar sobolev_norm(const BasicSpectralField<Scalar>& f, int s) { return std::sqrt(sobolev_norm_squared(f, s)); }

template <typename Scalar>
Scalar sobolev_norm(const BasicVectorField<Scalar>& v, int s) { return std::sqrt(sobolev_norm_squared(v, s)); }

/// L^2 inner product over the torus (trapezoidal rule, exact for band-limited data).
template <typename Scalar>
Scalar inner(const BasicSpectralField<Scalar>& a, const BasicSpectralField<Scalar>& b) {
  return (a.values() * b.values()).mean() * Scalar(a.grid().volume());
}

template <typename Scalar>
Scalar inner(const BasicVectorField<Scalar>& a, const BasicVectorField<Scalar>& b) {
  Scalar sum = 0;
  for (int j = 0; j < a.dims(); ++j) sum += inner(a[j], b[j]);
  return sum;
}

/// Pointwise a . b of two vector fields (not dealiased).
template <typename Scalar>
BasicSpectralField<Scalar> dot(const BasicVectorField<Scalar>& a, const BasicVectorField<Scalar>& b) {
  BasicSpectralField<Scalar> out(a.grid());
  for (int j = 0; j < a.dims(); ++j) out.values() += a[j].values() * b[j].values();
  return out;
}

}  // namespace radhydro
