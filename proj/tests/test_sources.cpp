#include "doctest.h"

#include "nrqed/dynamics.hpp"
#include "nrqed/sources.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace nrqed;
using namespace nrqed::testing;

namespace {

constexpr double pi = std::numbers::pi;
const Grid3 grid(16, 6.0);
const Constants atomic{};

ComplexScalarField plane_wave(const Grid3& g, const Eigen::Vector3d& k) {
  const double amp = 1.0 / std::sqrt(g.volume());
  return sample<complex>(g, [&](const Eigen::Vector3d& x) { return std::polar(amp, k.dot(x)); });
}

// Smooth, band-limited but non-trivial configuration; every quadratic
// product stays inside the grid's resolved band.
struct Config {
  ComplexScalarField psi;
  RealVectorField A;
  RealScalarField V;
};

Config random_config(const Grid3& g, std::uint64_t seed, int band) {
  return {normalized(random_complex_field(g, band, seed)), random_transverse_field(g, band, seed + 1, 20.0),
          random_real_field(g, band, seed + 2, 0.5)};
}

}  // namespace

TEST_CASE("charge density") {
  CHECK(norm(charge_density(ComplexScalarField(grid), atomic)) == 0.0);

  const Eigen::Vector3d k(2 * pi / grid.length(), 0.0, 0.0);
  const auto rho = charge_density(plane_wave(grid, k), atomic);
  CHECK((rho.values.array() - atomic.charge / grid.volume()).abs().maxCoeff() < 1e-12 / grid.volume());

  const auto psi = random_complex_field(grid, 4, 5);
  double direct = 0.0;
  for (Eigen::Index i = 0; i < psi.values.size(); ++i) direct += std::norm(psi.values[i]);
  direct *= grid.volume() / static_cast<double>(grid.size());
  CHECK(integrate(charge_density(psi, atomic)) == doctest::Approx(atomic.charge * direct).epsilon(1e-12));
}

TEST_CASE("current density") {
  SUBCASE("real wave function carries no current") {
    const auto psi = to_complex(random_real_field(grid, 4, 7));
    const auto j = current_density(psi, RealVectorField(grid), atomic);
    for (int a = 0; a < 3; ++a) CHECK(j[a].cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("plane wave") {
    const Eigen::Vector3d k(2 * 2 * pi / grid.length(), 0.0, -2 * pi / grid.length());
    const auto psi = plane_wave(grid, k);
    const auto j = current_density(psi, RealVectorField(grid), atomic);
    const Eigen::Vector3d expect = atomic.charge * atomic.hbar * k / (atomic.mass * grid.volume());
    for (int a = 0; a < 3; ++a)
      CHECK((j[a].array() - expect[a]).abs().maxCoeff() < 1e-12 * std::max(expect.norm(), 1.0 / grid.volume()));

    // Uniform A adds the diamagnetic term -(e^2/mc) A / Omega.
    const Eigen::Vector3d a0(3.0, -1.5, 0.25);
    RealVectorField A(grid);
    for (int c = 0; c < 3; ++c) A[c].setConstant(a0[c]);
    const auto jA = current_density(psi, A, atomic);
    const Eigen::Vector3d shift =
        -atomic.charge * atomic.charge / (atomic.mass * atomic.c) * a0 / grid.volume();
    for (int c = 0; c < 3; ++c)
      CHECK((jA[c].array() - expect[c] - shift[c]).abs().maxCoeff() < 1e-12 * (expect.norm() + shift.norm()));
  }
}

TEST_CASE("continuity residual") {
  const auto zero = continuity_residual(ComplexScalarField(grid), RealVectorField(grid), RealScalarField(grid), atomic);
  CHECK(norm(zero.residual) == 0.0);
  CHECK(zero.relative_norm == 0.0);

  const Grid3 g(24, 8.0);
  const auto psi = normalized(random_complex_field(g, 4, 91));
  const auto free = continuity_residual(psi, RealVectorField(g), RealScalarField(g), atomic);
  CHECK(free.relative_norm <= 1e-10);

  const auto cfg = random_config(g, 92, 3);
  const auto coupled = continuity_residual(cfg.psi, cfg.A, cfg.V, atomic);
  CHECK(coupled.relative_norm <= 1e-8);

  // Sign check against a broken Hamiltonian: a wrong charge in the current breaks continuity.
  Constants wrong = atomic;
  const auto jw = current_density(cfg.psi, cfg.A, wrong.with_charge(2.0 * atomic.charge));
  CHECK(norm(divergence(jw)) > 0.0);
}

TEST_CASE("gauge transformation") {
  // The phase exp(-i e chi / hbar c) is not band-limited; 32 points per axis
  // resolve it to round-off for |e chi / hbar c| <~ 0.04.
  const Grid3 grid(32, 6.0);
  const auto cfg = random_config(grid, 101, 2);
  const auto chi = random_real_field(grid, 2, 104, 5.0);
  const auto chi_dot = random_real_field(grid, 2, 105, 2.0);

  SUBCASE("zero gauge function is the identity") {
    const auto out = gauge_transform(cfg.V, cfg.A, cfg.psi, RealScalarField(grid), RealScalarField(grid), atomic);
    CHECK(out.V.values == cfg.V.values);
    CHECK(relative_difference(out.A, cfg.A) == 0.0);
    CHECK(out.psi.values == cfg.psi.values);
  }
  SUBCASE("observables are invariant") {
    const auto out = gauge_transform(cfg.V, cfg.A, cfg.psi, chi, chi_dot, atomic);
    CHECK((out.psi.values.cwiseAbs() - cfg.psi.values.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(relative_difference(charge_density(out.psi, atomic), charge_density(cfg.psi, atomic)) < 1e-12);
    CHECK(relative_difference(current_density(out.psi, out.A, atomic), current_density(cfg.psi, cfg.A, atomic)) <
          1e-9);
    CHECK(relative_difference(magnetic_field(out.A), magnetic_field(cfg.A)) < 1e-9);
    const auto A_dot = random_transverse_field(grid, 2, 106, 5.0);
    const auto A_dot_shifted = A_dot - gradient(chi_dot);
    CHECK(relative_difference(electric_field(out.V, A_dot_shifted, atomic), electric_field(cfg.V, A_dot, atomic)) <
          1e-9);
  }
  SUBCASE("composition") {
    const auto chi2 = random_real_field(grid, 2, 107, 1.5);
    const auto chi2_dot = random_real_field(grid, 2, 108, 0.5);
    const auto once = gauge_transform(cfg.V, cfg.A, cfg.psi, chi, chi_dot, atomic);
    const auto twice = gauge_transform(once.V, once.A, once.psi, chi2, chi2_dot, atomic);
    const auto combined = gauge_transform(cfg.V, cfg.A, cfg.psi, chi + chi2, chi_dot + chi2_dot, atomic);
    CHECK(relative_difference(twice.V, combined.V) < 1e-12);
    CHECK(relative_difference(twice.A, combined.A) < 1e-12);
    CHECK(relative_difference(twice.psi, combined.psi) < 1e-12);
  }
  SUBCASE("the opposite phase convention is not a symmetry of j") {
    const auto out = gauge_transform(cfg.V, cfg.A, cfg.psi, chi, chi_dot, atomic);
    const auto flipped = gauge_transform(cfg.V, cfg.A, cfg.psi, (-1.0) * chi, chi_dot, atomic);
    const auto j0 = current_density(cfg.psi, cfg.A, atomic);
    CHECK(relative_difference(current_density(flipped.psi, out.A, atomic), j0) > 1e-6);
  }
}
