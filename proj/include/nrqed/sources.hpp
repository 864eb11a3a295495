#pragma once

#include "nrqed/constants.hpp"
#include "nrqed/grid.hpp"

namespace nrqed {

/// Floor used when normalizing residuals of null fields.
inline constexpr double residual_floor = 1e-300;

/// rho = e |psi|^2
RealScalarField charge_density(const ComplexScalarField& psi, const Constants& k);

/// Charge current of the minimally coupled electron,
///   j = (e hbar / m) Im(psi* grad psi) - (e^2 / m c) A |psi|^2.
RealVectorField current_density(const ComplexScalarField& psi, const RealVectorField& A, const Constants& k);

/// Only the gradient part (e hbar / m) Im(psi* grad psi).
RealVectorField paramagnetic_current(const ComplexScalarField& psi, const Constants& k);

struct ContinuityResidual {
  RealScalarField residual;  // div j + d rho / dt
  double relative_norm;      // ||residual|| / max(||div j||, floor)
};

/// Evaluates div j + d rho/dt with d psi/dt taken from the Schrodinger
/// right-hand side for the same A and V.
ContinuityResidual continuity_residual(const ComplexScalarField& psi, const RealVectorField& A,
                                       const RealScalarField& V, const Constants& k);

struct GaugeFields {
  RealScalarField V;
  RealVectorField A;
  ComplexScalarField psi;
};

/// V' = V + chi_dot / c,  A' = A - grad chi,  psi' = psi exp(-i e chi / (hbar c)).
GaugeFields gauge_transform(const RealScalarField& V, const RealVectorField& A, const ComplexScalarField& psi,
                            const RealScalarField& chi, const RealScalarField& chi_dot, const Constants& k);

/// E = -grad V - (1/c) dA/dt
RealVectorField electric_field(const RealScalarField& V, const RealVectorField& A_dot, const Constants& k);
/// B = curl A
RealVectorField magnetic_field(const RealVectorField& A);

}  // namespace nrqed
