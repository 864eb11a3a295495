#pragma once

// Test-only comparison and sampling helpers.

#include "nrqed/grid.hpp"
#include "nrqed/random_fields.hpp"
#include "nrqed/spectral.hpp"

#include <array>
#include <numbers>
#include <random>

namespace nrqed::testing {

inline double relative_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-300});
}
inline double relative_difference(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-300});
}
template <typename S>
double relative_difference(const VectorField<S>& a, const VectorField<S>& b) {
  return norm(a - b) / std::max({norm(a), norm(b), 1e-300});
}
template <typename S>
double relative_difference(const ScalarField<S>& a, const ScalarField<S>& b) {
  return norm(a - b) / std::max({norm(a), norm(b), 1e-300});
}

/// Fills a field from a function of position.
template <typename S, typename Fn>
ScalarField<S> sample(const Grid3& grid, Fn&& fn) {
  ScalarField<S> f(grid);
  for (int iz = 0; iz < grid.nz(); ++iz)
    for (int iy = 0; iy < grid.ny(); ++iy)
      for (int ix = 0; ix < grid.nx(); ++ix) f(ix, iy, iz) = fn(grid.position(ix, iy, iz));
  return f;
}

}  // namespace nrqed::testing
