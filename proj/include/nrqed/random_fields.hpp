#pragma once

// Band-limited random fields for initial conditions and tests. Coefficients
// are drawn in a grid-independent order, so the same (seed, band) gives the
// same continuous function on every grid that resolves it.

#include "nrqed/grid.hpp"
#include "nrqed/spectral.hpp"

#include <Eigen/Geometry>

#include <array>
#include <numbers>
#include <random>

namespace nrqed {

inline Eigen::VectorXcd band_limited_coefficients(const Grid3& grid, int band, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(grid.size());
  const double n = static_cast<double>(grid.size());
  for (int mz = -band; mz <= band; ++mz)
    for (int my = -band; my <= band; ++my)
      for (int mx = -band; mx <= band; ++mx) {
        const complex c(u(rng), u(rng));
        auto wrap = [](int m, int len) { return m < 0 ? m + len : m; };
        coeffs[grid.index(wrap(mx, grid.nx()), wrap(my, grid.ny()), wrap(mz, grid.nz()))] = amplitude * n * c;
      }
  return coeffs;
}

/// Random field with modes |m_axis| <= band, scaled so that max |f| = amplitude.
inline ComplexScalarField random_complex_field(const Grid3& grid, int band, std::uint64_t seed, double amplitude = 1.0) {
  auto f = from_fourier<complex>(grid, band_limited_coefficients(grid, band, seed, 1.0));
  f.values *= amplitude / f.values.cwiseAbs().maxCoeff();
  return f;
}

inline RealScalarField random_real_field(const Grid3& grid, int band, std::uint64_t seed, double amplitude = 1.0) {
  auto f = from_fourier<double>(grid, band_limited_coefficients(grid, band, seed, 1.0));
  f.values *= amplitude / f.values.cwiseAbs().maxCoeff();
  return f;
}

inline RealVectorField random_vector_field(const Grid3& grid, int band, std::uint64_t seed, double amplitude = 1.0) {
  RealVectorField v(grid);
  for (int a = 0; a < 3; ++a) v[a] = random_real_field(grid, band, seed * 3 + static_cast<std::uint64_t>(a), amplitude).values;
  return v;
}

inline RealVectorField random_transverse_field(const Grid3& grid, int band, std::uint64_t seed, double amplitude = 1.0) {
  return transverse_project(random_vector_field(grid, band, seed, amplitude), ZeroMode::discard);
}

/// Sum of standing waves amplitude * e_j cos(q_j.x + phase_j) over the six
/// lowest wavevector pairs (axes and face diagonals), each with a
/// polarization orthogonal to q_j. Divergence free by construction.
inline RealVectorField six_mode_field(const Grid3& grid, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::array<Eigen::Vector3i, 6> m{Eigen::Vector3i(1, 0, 0), Eigen::Vector3i(0, 1, 0), Eigen::Vector3i(0, 0, 1),
                                         Eigen::Vector3i(1, 1, 0), Eigen::Vector3i(0, 1, -1), Eigen::Vector3i(1, 0, 1)};
  const double k0 = grid.fundamental_wavenumber();
  RealVectorField A(grid);
  for (const auto& mj : m) {
    const Eigen::Vector3d q = k0 * mj.cast<double>();
    const Eigen::Vector3d any = std::abs(q.normalized()[2]) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
    const Eigen::Vector3d e1 = q.cross(any).normalized();
    const Eigen::Vector3d e2 = q.cross(e1).normalized();
    const double angle = 2.0 * std::numbers::pi * u(rng);
    const Eigen::Vector3d e = std::cos(angle) * e1 + std::sin(angle) * e2;
    const double phase = 2.0 * std::numbers::pi * u(rng);
    const double a = amplitude * (0.5 + u(rng));
    for (int iz = 0; iz < grid.nz(); ++iz)
      for (int iy = 0; iy < grid.ny(); ++iy)
        for (int ix = 0; ix < grid.nx(); ++ix) {
          const double c = a * std::cos(q.dot(grid.position(ix, iy, iz)) + phase);
          for (int d = 0; d < 3; ++d) A[d][grid.index(ix, iy, iz)] += c * e[d];
        }
  }
  return A;
}

/// Normalizes psi to int |psi|^2 = 1.
inline ComplexScalarField normalized(ComplexScalarField psi) {
  psi.values /= norm(psi);
  return psi;
}

}  // namespace nrqed
