#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace nrqed {

using complex = std::complex<double>;

/// Raised when two fields that must share a grid do not.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Periodic cubic box of edge L sampled on nx*ny*nz points.
///
/// Storage order is x fastest, z slowest. Wavevectors are k = 2 pi m / L
/// with m in FFT order (0, 1, ..., n/2-1, -n/2, ..., -1). The Nyquist
/// component m = -n/2 has no sign partner on the grid; all spectral
/// operators treat its wavevector component as zero so that the
/// wavevector set is closed under negation and real fields stay real.
class Grid3 {
 public:
  Grid3(int nx, int ny, int nz, double box_length);
  Grid3(int n, double box_length) : Grid3(n, n, n, box_length) {}

  int nx() const { return n_[0]; }
  int ny() const { return n_[1]; }
  int nz() const { return n_[2]; }
  int n(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
  double length() const { return length_; }
  double volume() const { return length_ * length_ * length_; }
  Eigen::Index size() const { return Eigen::Index{n_[0]} * n_[1] * n_[2]; }
  double cell_volume() const { return volume() / static_cast<double>(size()); }
  double spacing(int axis) const { return length_ / n(axis); }
  /// 2 pi / L
  double fundamental_wavenumber() const;

  Eigen::Index index(int ix, int iy, int iz) const {
    return ix + Eigen::Index{n_[0]} * (iy + Eigen::Index{n_[1]} * iz);
  }
  Eigen::Vector3d position(int ix, int iy, int iz) const {
    return {ix * spacing(0), iy * spacing(1), iz * spacing(2)};
  }

  /// Signed mode number of FFT index i along an axis of n points.
  static int mode_number(int i, int n) { return i < n / 2 ? i : i - n; }
  /// Wavevector component used by derivatives; zero at the Nyquist index.
  double spectral_wavenumber(int axis, int i) const;
  /// Largest |k| component that is resolved with its sign partner.
  double max_resolved_wavenumber() const;

  bool operator==(const Grid3& other) const = default;
  std::string describe() const;

 private:
  std::array<int, 3> n_;
  double length_;
};

template <typename Scalar>
using FieldVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Samples of a scalar field on a grid.
template <typename Scalar>
struct ScalarField {
  Grid3 grid;
  FieldVector<Scalar> values;

  explicit ScalarField(const Grid3& g) : grid(g), values(FieldVector<Scalar>::Zero(g.size())) {}
  ScalarField(const Grid3& g, FieldVector<Scalar> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw GridMismatch("sample count does not match grid " + grid.describe());
  }

  Scalar& operator()(int ix, int iy, int iz) { return values[grid.index(ix, iy, iz)]; }
  const Scalar& operator()(int ix, int iy, int iz) const { return values[grid.index(ix, iy, iz)]; }
};

/// Three component arrays on a shared grid.
template <typename Scalar>
struct VectorField {
  Grid3 grid;
  std::array<FieldVector<Scalar>, 3> comp;

  explicit VectorField(const Grid3& g) : grid(g) {
    for (auto& c : comp) c = FieldVector<Scalar>::Zero(g.size());
  }
  VectorField(const Grid3& g, std::array<FieldVector<Scalar>, 3> c) : grid(g), comp(std::move(c)) {
    for (const auto& x : comp)
      if (x.size() != grid.size()) throw GridMismatch("component sample count does not match grid " + grid.describe());
  }

  FieldVector<Scalar>& operator[](int axis) { return comp[static_cast<std::size_t>(axis)]; }
  const FieldVector<Scalar>& operator[](int axis) const { return comp[static_cast<std::size_t>(axis)]; }
};

using RealScalarField = ScalarField<double>;
using ComplexScalarField = ScalarField<complex>;
using RealVectorField = VectorField<double>;
using ComplexVectorField = VectorField<complex>;

inline void require_same_grid(const Grid3& a, const Grid3& b) {
  if (!(a == b)) throw GridMismatch("grid mismatch: " + a.describe() + " vs " + b.describe());
}

// Linear algebra on fields. These mirror Eigen's coefficient-wise operators.

template <typename S>
ScalarField<S> operator+(const ScalarField<S>& a, const ScalarField<S>& b) {
  require_same_grid(a.grid, b.grid);
  return ScalarField<S>(a.grid, a.values + b.values);
}
template <typename S>
ScalarField<S> operator-(const ScalarField<S>& a, const ScalarField<S>& b) {
  require_same_grid(a.grid, b.grid);
  return ScalarField<S>(a.grid, a.values - b.values);
}
template <typename S, typename T>
ScalarField<S> operator*(T alpha, const ScalarField<S>& a) {
  return ScalarField<S>(a.grid, S(alpha) * a.values);
}
template <typename S>
VectorField<S> operator+(const VectorField<S>& a, const VectorField<S>& b) {
  require_same_grid(a.grid, b.grid);
  VectorField<S> r(a.grid);
  for (int i = 0; i < 3; ++i) r[i] = a[i] + b[i];
  return r;
}
template <typename S>
VectorField<S> operator-(const VectorField<S>& a, const VectorField<S>& b) {
  require_same_grid(a.grid, b.grid);
  VectorField<S> r(a.grid);
  for (int i = 0; i < 3; ++i) r[i] = a[i] - b[i];
  return r;
}
template <typename S, typename T>
VectorField<S> operator*(T alpha, const VectorField<S>& a) {
  VectorField<S> r(a.grid);
  for (int i = 0; i < 3; ++i) r[i] = S(alpha) * a[i];
  return r;
}

/// Grid quadrature  sum conj(f) g dV.
template <typename S>
complex inner_product(const ScalarField<S>& f, const ScalarField<S>& g) {
  require_same_grid(f.grid, g.grid);
  complex acc = 0.0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i) acc += std::conj(complex(f.values[i])) * complex(g.values[i]);
  return acc * f.grid.cell_volume();
}
template <typename S>
complex inner_product(const VectorField<S>& f, const VectorField<S>& g) {
  require_same_grid(f.grid, g.grid);
  complex acc = 0.0;
  for (int a = 0; a < 3; ++a)
    for (Eigen::Index i = 0; i < f[a].size(); ++i) acc += std::conj(complex(f[a][i])) * complex(g[a][i]);
  return acc * f.grid.cell_volume();
}

template <typename S>
double norm_squared(const ScalarField<S>& f) {
  return f.values.squaredNorm() * f.grid.cell_volume();
}
template <typename S>
double norm_squared(const VectorField<S>& f) {
  return (f[0].squaredNorm() + f[1].squaredNorm() + f[2].squaredNorm()) * f.grid.cell_volume();
}
template <typename S>
double norm(const ScalarField<S>& f) {
  return std::sqrt(norm_squared(f));
}
template <typename S>
double norm(const VectorField<S>& f) {
  return std::sqrt(norm_squared(f));
}

/// Integral of a scalar field over the box.
template <typename S>
S integrate(const ScalarField<S>& f) {
  return f.values.sum() * f.grid.cell_volume();
}

RealScalarField real_part(const ComplexScalarField& f);
RealVectorField real_part(const ComplexVectorField& f);
ComplexScalarField to_complex(const RealScalarField& f);

/// Pointwise dot product of two real vector fields.
RealScalarField dot(const RealVectorField& a, const RealVectorField& b);
/// Pointwise scaling of a vector field by a real scalar field.
RealVectorField scale(const RealScalarField& s, const RealVectorField& v);

}  // namespace nrqed
