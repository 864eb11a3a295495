#pragma once

#include "nrqed/grid.hpp"

namespace nrqed {

/// Unnormalized forward DFT of grid samples (sum_x f(x) e^{-i k.x}).
Eigen::VectorXcd forward_fft(const Grid3& grid, Eigen::VectorXcd samples);
/// Inverse DFT including the 1/N factor, so inverse_fft(forward_fft(f)) == f.
Eigen::VectorXcd inverse_fft(const Grid3& grid, Eigen::VectorXcd coefficients);

/// Fourier coefficients of a field in FFT storage order.
template <typename S>
Eigen::VectorXcd to_fourier(const ScalarField<S>& f) {
  return forward_fft(f.grid, f.values.template cast<complex>());
}
/// Inverse of to_fourier. For real S the imaginary part is dropped.
template <typename S>
ScalarField<S> from_fourier(const Grid3& grid, Eigen::VectorXcd coefficients);

/// Selects what transverse_project does with modes whose wavevector vanishes.
enum class ZeroMode { keep, discard };

template <typename S>
VectorField<S> gradient(const ScalarField<S>& f);
template <typename S>
ScalarField<S> divergence(const VectorField<S>& v);
template <typename S>
VectorField<S> curl(const VectorField<S>& v);
template <typename S>
ScalarField<S> laplacian(const ScalarField<S>& f);

/// Applies P(k) = 1 - k k^T / |k|^2 mode by mode.
template <typename S>
VectorField<S> transverse_project(const VectorField<S>& v, ZeroMode zero_mode = ZeroMode::keep);

/// Periodic solution of  lap V = -4 pi (rho - mean rho)  with zero-mean V.
/// Content of rho on a Nyquist plane has no first derivative there and is dropped.
RealScalarField solve_coulomb(const RealScalarField& rho);

/// Zeroes every Fourier mode with |m_axis| > n_axis / 3 on any axis.
template <typename S>
ScalarField<S> dealias_two_thirds(const ScalarField<S>& f);
template <typename S>
VectorField<S> dealias_two_thirds(const VectorField<S>& v);

/// Zeroes all Fourier content on the Nyquist planes, the modes every odd
/// derivative discards.
RealScalarField strip_nyquist(const RealScalarField& f);

/// ||div v|| / ||k-weighted spectrum of v||; zero for a field with only k = 0 content.
double relative_divergence(const RealVectorField& v);

/// Loops over every Fourier index with its spectral wavevector.
template <typename Fn>
void for_each_wavevector(const Grid3& grid, Fn&& fn) {
  Eigen::VectorXd kx(grid.nx());
  for (int ix = 0; ix < grid.nx(); ++ix) kx[ix] = grid.spectral_wavenumber(0, ix);
  Eigen::Index idx = 0;
  for (int iz = 0; iz < grid.nz(); ++iz) {
    const double kz = grid.spectral_wavenumber(2, iz);
    for (int iy = 0; iy < grid.ny(); ++iy) {
      const double ky = grid.spectral_wavenumber(1, iy);
      for (int ix = 0; ix < grid.nx(); ++ix, ++idx) fn(idx, Eigen::Vector3d(kx[ix], ky, kz));
    }
  }
}

}  // namespace nrqed
