#include "nrqed/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nrqed {

Grid3::Grid3(int nx, int ny, int nz, double box_length) : n_{nx, ny, nz}, length_(box_length) {
  for (int n : n_) {
    if (n < 4 || n % 2 != 0)
      throw std::invalid_argument("grid points per axis must be even and >= 4, got " + std::to_string(n));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw std::invalid_argument("box length must be positive and finite");
}

double Grid3::fundamental_wavenumber() const { return 2.0 * std::numbers::pi / length_; }

double Grid3::spectral_wavenumber(int axis, int i) const {
  const int n = this->n(axis);
  if (i == n / 2) return 0.0;
  return fundamental_wavenumber() * mode_number(i, n);
}

double Grid3::max_resolved_wavenumber() const {
  int nmin = std::min({n_[0], n_[1], n_[2]});
  return fundamental_wavenumber() * (nmin / 2 - 1);
}

std::string Grid3::describe() const {
  std::ostringstream os;
  os << n_[0] << "x" << n_[1] << "x" << n_[2] << " L=" << length_;
  return os.str();
}

RealScalarField real_part(const ComplexScalarField& f) { return RealScalarField(f.grid, f.values.real()); }

RealVectorField real_part(const ComplexVectorField& f) {
  RealVectorField r(f.grid);
  for (int a = 0; a < 3; ++a) r[a] = f[a].real();
  return r;
}

ComplexScalarField to_complex(const RealScalarField& f) {
  return ComplexScalarField(f.grid, f.values.cast<complex>());
}

RealScalarField dot(const RealVectorField& a, const RealVectorField& b) {
  require_same_grid(a.grid, b.grid);
  RealScalarField r(a.grid);
  r.values = a[0].cwiseProduct(b[0]) + a[1].cwiseProduct(b[1]) + a[2].cwiseProduct(b[2]);
  return r;
}

RealVectorField scale(const RealScalarField& s, const RealVectorField& v) {
  require_same_grid(s.grid, v.grid);
  RealVectorField r(v.grid);
  for (int a = 0; a < 3; ++a) r[a] = s.values.cwiseProduct(v[a]);
  return r;
}

}  // namespace nrqed
