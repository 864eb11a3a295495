#pragma once

#include "nrqed/constants.hpp"
#include "nrqed/errors.hpp"
#include "nrqed/grid.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace nrqed {

/// Electron wave function plus the transverse vector potential and its
/// conjugate momentum Pi = (1 / 4 pi c^2) dA/dt.
struct SemiclassicalState {
  ComplexScalarField psi;
  RealVectorField A_perp;
  RealVectorField Pi_perp;
  double t = 0.0;

  explicit SemiclassicalState(const Grid3& g) : psi(g), A_perp(g), Pi_perp(g) {}
  SemiclassicalState(ComplexScalarField p, RealVectorField a, RealVectorField pi, double time = 0.0);

  const Grid3& grid() const { return psi.grid; }
};

/// Largest relative divergence accepted for a field declared transverse.
inline constexpr double transversality_tolerance = 1e-10;

/// d psi / dt for  i hbar psi_t = [ (1/2m)(-i hbar grad - (e/c) A)^2 + e V ] psi.
///
/// The A.p cross term is evaluated in the symmetric form
/// (i hbar e / 2 m c)(A.grad psi + div(A psi)), which equals the expanded
/// form for divergence-free A and keeps the discrete operator Hermitian.
/// Throws std::invalid_argument when A is not transverse.
ComplexScalarField schrodinger_rhs(const ComplexScalarField& psi, const RealVectorField& A, const RealScalarField& V,
                                   const Constants& k);

/// Self-consistent Coulomb potential of the electron's own charge.
RealScalarField coulomb_potential(const ComplexScalarField& psi, const Constants& k);

struct FieldRates {
  RealVectorField A_dot;
  RealVectorField Pi_dot;
};

/// dA/dt = 4 pi c^2 Pi,  dPi/dt = -(1/4 pi) curl curl A + (1/c) P j.
/// The k = 0 mode of the source is dropped (it is held at zero).
FieldRates maxwell_transverse_rhs(const SemiclassicalState& state, const RealVectorField& j, const Constants& k);

struct StepOptions {
  bool dealias = false;  // 2/3-rule truncation of the field sources
};

/// One Strang step:
///   free(dt/2) potential(dt/2) coupling(dt) potential(dt/2) free(dt/2)
/// free: exact kinetic propagation of psi and exact rotation of every
///   (A, Pi) Fourier mode at omega = c|k|;
/// potential: position-space phase exp(-i dt (eV + e^2 A^2 / 2mc^2)/hbar)
///   with the matching transverse kick of Pi;
/// coupling: the A.p flow at frozen A, exp(dt G) psi by a Taylor series to
///   round-off, with a midpoint kick of Pi by the paramagnetic current.
/// Throws NumericalError on non-finite values.
SemiclassicalState step(const SemiclassicalState& state, double dt, const Constants& k, const StepOptions& opt = {});

/// `steps` consecutive Strang steps. The free half steps between neighbours
/// are merged, so the result equals repeated step() up to round-off.
SemiclassicalState evolve(const SemiclassicalState& state, double dt, int steps, const Constants& k,
                          const StepOptions& opt = {});

struct EnergyBreakdown {
  double electric = 0.0;  // 2 pi c^2 int Pi^2
  double magnetic = 0.0;  // (1/8 pi) int |curl A|^2
  double kinetic = 0.0;   // (1/2m) int |(-i hbar grad - (e/c) A) psi|^2
  double coulomb = 0.0;   // (1/2) int rho V
  double field() const { return electric + magnetic; }
  double total() const { return electric + magnetic + kinetic + coulomb; }
};

EnergyBreakdown total_energy(const SemiclassicalState& state, const Constants& k);

/// Photon part  (1/8 pi)|grad V + A_dot / c|^2 - (1/8 pi)|curl A|^2.
RealScalarField photon_lagrangian_density(const RealVectorField& A, const RealVectorField& A_dot,
                                          const RealScalarField& V, const Constants& k);
/// Free electron part  -(hbar^2/2m)|grad psi|^2 - hbar Im(psi* psi_dot).
RealScalarField electron_lagrangian_density(const ComplexScalarField& psi, const ComplexScalarField& psi_dot,
                                            const Constants& k);
/// Full minimally coupled Lagrangian density.
RealScalarField lagrangian_density(const SemiclassicalState& state, const ComplexScalarField& psi_dot,
                                   const RealVectorField& A_dot, const RealScalarField& V, const Constants& k);

/// int(-L) + int Pi_A . A_dot + int (Pi_psi psi_dot + Pi_psi* psi*_dot), with
/// Pi_A = (grad V + A_dot / c) / (4 pi c) and Pi_psi = (i hbar / 2) psi*.
double legendre_energy(const SemiclassicalState& state, const ComplexScalarField& psi_dot,
                       const RealVectorField& A_dot, const RealScalarField& V, const Constants& k);

/// Residuals of the field equations along a trajectory, one entry per
/// interior time (central differences in t).
struct EulerLagrangeResidual {
  std::vector<double> times;
  std::vector<double> ampere;  // transverse Ampere-Maxwell law
  std::vector<double> gauss;   // div E = 4 pi (rho - mean rho)
  std::vector<double> schrodinger;

  double max_ampere() const;
  double max_gauss() const;
  double max_schrodinger() const;
};

/// Needs at least three equally spaced states.
EulerLagrangeResidual euler_lagrange_residual(const std::vector<SemiclassicalState>& trajectory, double dt,
                                              const Constants& k);

}  // namespace nrqed
