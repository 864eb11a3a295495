#include "nrqed/sources.hpp"

#include "nrqed/dynamics.hpp"
#include "nrqed/spectral.hpp"

#include <algorithm>

namespace nrqed {

RealScalarField charge_density(const ComplexScalarField& psi, const Constants& k) {
  return RealScalarField(psi.grid, k.charge * psi.values.cwiseAbs2());
}

RealVectorField paramagnetic_current(const ComplexScalarField& psi, const Constants& k) {
  const ComplexVectorField grad = gradient(psi);
  const double pref = k.charge * k.hbar / k.mass;
  RealVectorField j(psi.grid);
  for (int a = 0; a < 3; ++a) j[a] = pref * (psi.values.conjugate().cwiseProduct(grad[a])).imag();
  return j;
}

RealVectorField current_density(const ComplexScalarField& psi, const RealVectorField& A, const Constants& k) {
  require_same_grid(psi.grid, A.grid);
  RealVectorField j = paramagnetic_current(psi, k);
  const Eigen::VectorXd density = psi.values.cwiseAbs2();
  const double pref = k.charge * k.charge / (k.mass * k.c);
  for (int a = 0; a < 3; ++a) j[a] -= pref * A[a].cwiseProduct(density);
  return j;
}

ContinuityResidual continuity_residual(const ComplexScalarField& psi, const RealVectorField& A,
                                       const RealScalarField& V, const Constants& k) {
  require_same_grid(psi.grid, A.grid);
  require_same_grid(psi.grid, V.grid);
  const RealScalarField div_j = divergence(current_density(psi, A, k));
  const ComplexScalarField psi_dot = schrodinger_rhs(psi, A, V, k);
  RealScalarField drho_dt(psi.grid, 2.0 * k.charge * (psi.values.conjugate().cwiseProduct(psi_dot.values)).real());
  RealScalarField r = div_j + drho_dt;
  const double rel = norm(r) / std::max(norm(div_j), residual_floor);
  return {std::move(r), rel};
}

GaugeFields gauge_transform(const RealScalarField& V, const RealVectorField& A, const ComplexScalarField& psi,
                            const RealScalarField& chi, const RealScalarField& chi_dot, const Constants& k) {
  require_same_grid(V.grid, A.grid);
  require_same_grid(V.grid, psi.grid);
  require_same_grid(V.grid, chi.grid);
  require_same_grid(V.grid, chi_dot.grid);
  GaugeFields out{V, A - gradient(chi), psi};
  out.V.values += chi_dot.values / k.c;
  const double phase_per_chi = -k.charge / (k.hbar * k.c);
  for (Eigen::Index i = 0; i < psi.values.size(); ++i)
    out.psi.values[i] *= std::polar(1.0, phase_per_chi * chi.values[i]);
  return out;
}

RealVectorField electric_field(const RealScalarField& V, const RealVectorField& A_dot, const Constants& k) {
  require_same_grid(V.grid, A_dot.grid);
  return (-1.0) * gradient(V) - (1.0 / k.c) * A_dot;
}

RealVectorField magnetic_field(const RealVectorField& A) { return curl(A); }

}  // namespace nrqed
