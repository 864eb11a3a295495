#include "nrqed/dynamics.hpp"

#include "nrqed/sources.hpp"
#include "nrqed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nrqed {

namespace {

constexpr double pi = std::numbers::pi;

ComplexVectorField times(const RealVectorField& A, const ComplexScalarField& psi) {
  ComplexVectorField out(psi.grid);
  for (int a = 0; a < 3; ++a) out[a] = A[a].cast<complex>().cwiseProduct(psi.values);
  return out;
}

Eigen::VectorXd squared_magnitude(const RealVectorField& A) {
  return A[0].cwiseAbs2() + A[1].cwiseAbs2() + A[2].cwiseAbs2();
}

// (A.grad + div A) psi, the symmetric A.p kernel without prefactors.
ComplexScalarField symmetric_transport(const RealVectorField& A, const ComplexScalarField& psi) {
  const ComplexVectorField grad = gradient(psi);
  ComplexScalarField out = divergence(times(A, psi));
  for (int a = 0; a < 3; ++a) out.values += A[a].cast<complex>().cwiseProduct(grad[a]);
  return out;
}

bool all_finite(const SemiclassicalState& s) {
  if (!s.psi.values.allFinite()) return false;
  for (int a = 0; a < 3; ++a)
    if (!s.A_perp[a].allFinite() || !s.Pi_perp[a].allFinite()) return false;
  return true;
}

RealVectorField field_source(const RealVectorField& j, const StepOptions& opt) {
  RealVectorField p = transverse_project(j, ZeroMode::discard);
  return opt.dealias ? dealias_two_thirds(p) : p;
}

// Exact free evolution: kinetic phase for psi, per-mode rotation of (A, Pi).
void free_flow(SemiclassicalState& s, double tau, const Constants& k) {
  const Grid3& grid = s.grid();
  Eigen::VectorXcd psik = to_fourier(s.psi);
  std::array<Eigen::VectorXcd, 3> ak, pk;
  for (int a = 0; a < 3; ++a) {
    ak[static_cast<std::size_t>(a)] = to_fourier(RealScalarField(grid, s.A_perp[a]));
    pk[static_cast<std::size_t>(a)] = to_fourier(RealScalarField(grid, s.Pi_perp[a]));
  }
  const double kin = k.hbar / (2.0 * k.mass);
  const double four_pi_c2 = 4.0 * pi * k.c * k.c;
  for_each_wavevector(grid, [&](Eigen::Index i, const Eigen::Vector3d& kv) {
    const double k2 = kv.squaredNorm();
    psik[i] *= std::polar(1.0, -kin * k2 * tau);
    if (k2 == 0.0) {
      for (int a = 0; a < 3; ++a) ak[static_cast<std::size_t>(a)][i] = pk[static_cast<std::size_t>(a)][i] = 0.0;
      return;
    }
    const double omega = k.c * std::sqrt(k2);
    const double cs = std::cos(omega * tau);
    const double sn = std::sin(omega * tau);
    for (std::size_t a = 0; a < 3; ++a) {
      const complex A0 = ak[a][i];
      const complex P0 = pk[a][i];
      ak[a][i] = A0 * cs + P0 * (four_pi_c2 / omega * sn);
      pk[a][i] = P0 * cs - A0 * (omega / four_pi_c2 * sn);
    }
  });
  s.psi = from_fourier<complex>(grid, std::move(psik));
  for (int a = 0; a < 3; ++a) {
    s.A_perp[a] = from_fourier<double>(grid, std::move(ak[static_cast<std::size_t>(a)])).values;
    s.Pi_perp[a] = from_fourier<double>(grid, std::move(pk[static_cast<std::size_t>(a)])).values;
  }
}

// Exact flow of the position-diagonal part  int e^2 A^2 |psi|^2 / 2mc^2 + rho V / 2.
// The matching Pi kick, tau/c times the diamagnetic current, is added to
// `source` unprojected.
void potential_flow(SemiclassicalState& s, double tau, const Constants& k, RealVectorField& source) {
  const Eigen::VectorXd density = s.psi.values.cwiseAbs2();
  const RealScalarField V = solve_coulomb(RealScalarField(s.grid(), k.charge * density));
  const Eigen::VectorXd A2 = squared_magnitude(s.A_perp);
  const double diamagnetic = k.charge * k.charge / (2.0 * k.mass * k.c * k.c);
  for (Eigen::Index i = 0; i < density.size(); ++i) {
    const double w = k.charge * V.values[i] + diamagnetic * A2[i];
    s.psi.values[i] *= std::polar(1.0, -w * tau / k.hbar);
  }
  // j_dia = -(e^2/mc) A |psi|^2
  const double pref = -tau * k.charge * k.charge / (k.mass * k.c * k.c);
  for (int a = 0; a < 3; ++a) source[a] += pref * s.A_perp[a].cwiseProduct(density);
}

struct TransportResult {
  ComplexScalarField mid;  // exp(tau G / 2) psi
  ComplexScalarField end;  // exp(tau G) psi
};

// exp(t G) psi with G psi = (e / 2mc)(A.grad + div A) psi, anti-Hermitian.
// The Taylor terms of one substep serve both the half and the full substep.
TransportResult transport_exponential(const RealVectorField& A, const ComplexScalarField& psi, double tau,
                                      const Constants& k) {
  const double g = k.charge / (2.0 * k.mass * k.c);
  double amax = 0.0;
  for (Eigen::Index i = 0; i < A.grid.size(); ++i)
    amax = std::max(amax, std::sqrt(A[0][i] * A[0][i] + A[1][i] * A[1][i] + A[2][i] * A[2][i]));
  // ||G|| <= 2 |g| max|A| sqrt(3) k_max
  const double kmax = A.grid.fundamental_wavenumber() * (std::max({A.grid.nx(), A.grid.ny(), A.grid.nz()}) / 2);
  const double bound = 2.0 * std::abs(g) * amax * std::sqrt(3.0) * kmax * std::abs(tau);
  int substeps = std::max(1, static_cast<int>(std::ceil(bound / 0.5)));
  if (substeps > 1 && substeps % 2 == 1) ++substeps;
  const double h = tau / substeps;

  TransportResult r{psi, psi};
  ComplexScalarField& current = r.end;
  for (int s = 0; s < substeps; ++s) {
    ComplexScalarField term = current;
    ComplexScalarField sum = current;
    ComplexScalarField half = current;
    const double scale = current.values.norm();
    double weight = 1.0;
    int n = 1;
    for (; n <= 60; ++n) {
      term.values = (g * h / n) * symmetric_transport(A, term).values;
      sum.values += term.values;
      weight *= 0.5;
      if (substeps == 1) half.values += weight * term.values;
      if (term.values.norm() <= 1e-16 * scale) break;
    }
    if (n > 60) throw NumericalError("A.p propagator series did not converge");
    current = std::move(sum);
    if (substeps == 1) r.mid = std::move(half);
    else if (2 * (s + 1) == substeps) r.mid = current;
  }
  return r;
}

void coupling_flow(SemiclassicalState& s, double tau, const Constants& k, RealVectorField& source) {
  TransportResult r = transport_exponential(s.A_perp, s.psi, tau, k);
  s.psi = std::move(r.end);
  const RealVectorField jp = paramagnetic_current(r.mid, k);
  for (int a = 0; a < 3; ++a) source[a] += (tau / k.c) * jp[a];
}

// potential(dt/2) coupling(dt) potential(dt/2). A is frozen throughout and Pi
// enters nothing here, so the three Pi kicks share one projection.
void interaction_flow(SemiclassicalState& s, double dt, const Constants& k, const StepOptions& opt) {
  if (k.charge == 0.0) return;
  RealVectorField source(s.grid());
  potential_flow(s, 0.5 * dt, k, source);
  coupling_flow(s, dt, k, source);
  potential_flow(s, 0.5 * dt, k, source);
  s.Pi_perp = s.Pi_perp + field_source(source, opt);
}

std::string describe_nonfinite(const SemiclassicalState& s) {
  std::ostringstream os;
  os << "non-finite state at t=" << s.t << " (psi finite: " << s.psi.values.allFinite()
     << ", A finite: " << (s.A_perp[0].allFinite() && s.A_perp[1].allFinite() && s.A_perp[2].allFinite())
     << ", Pi finite: " << (s.Pi_perp[0].allFinite() && s.Pi_perp[1].allFinite() && s.Pi_perp[2].allFinite())
     << ")";
  return os.str();
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

}  // namespace

SemiclassicalState::SemiclassicalState(ComplexScalarField p, RealVectorField a, RealVectorField pi, double time)
    : psi(std::move(p)), A_perp(std::move(a)), Pi_perp(std::move(pi)), t(time) {
  require_same_grid(psi.grid, A_perp.grid);
  require_same_grid(psi.grid, Pi_perp.grid);
}

ComplexScalarField schrodinger_rhs(const ComplexScalarField& psi, const RealVectorField& A, const RealScalarField& V,
                                   const Constants& k) {
  require_same_grid(psi.grid, A.grid);
  require_same_grid(psi.grid, V.grid);
  if (const double d = relative_divergence(A); d > transversality_tolerance)
    throw std::invalid_argument("vector potential is not transverse (relative divergence " + std::to_string(d) + ")");

  const ComplexScalarField lap = laplacian(psi);
  const ComplexScalarField transport = symmetric_transport(A, psi);
  const Eigen::VectorXd A2 = squared_magnitude(A);

  const complex coupling(0.0, k.hbar * k.charge / (2.0 * k.mass * k.c));
  const double diamagnetic = k.charge * k.charge / (2.0 * k.mass * k.c * k.c);
  const double kinetic = -k.hbar * k.hbar / (2.0 * k.mass);
  const complex to_rate(0.0, -1.0 / k.hbar);

  ComplexScalarField out(psi.grid);
  for (Eigen::Index i = 0; i < psi.values.size(); ++i) {
    const complex h = kinetic * lap.values[i] + coupling * transport.values[i] +
                      (diamagnetic * A2[i] + k.charge * V.values[i]) * psi.values[i];
    out.values[i] = to_rate * h;
  }
  return out;
}

RealScalarField coulomb_potential(const ComplexScalarField& psi, const Constants& k) {
  return solve_coulomb(charge_density(psi, k));
}

FieldRates maxwell_transverse_rhs(const SemiclassicalState& state, const RealVectorField& j, const Constants& k) {
  require_same_grid(state.grid(), j.grid);
  FieldRates r{(4.0 * pi * k.c * k.c) * state.Pi_perp, RealVectorField(state.grid())};
  r.Pi_dot = (-1.0 / (4.0 * pi)) * curl(curl(state.A_perp)) +
             (1.0 / k.c) * transverse_project(j, ZeroMode::discard);
  return r;
}

SemiclassicalState step(const SemiclassicalState& state, double dt, const Constants& k, const StepOptions& opt) {
  return evolve(state, dt, 1, k, opt);
}

SemiclassicalState evolve(const SemiclassicalState& state, double dt, int steps, const Constants& k,
                          const StepOptions& opt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive");
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  SemiclassicalState s = state;
  if (steps == 0) return s;
  free_flow(s, 0.5 * dt, k);
  for (int n = 0; n < steps; ++n) {
    interaction_flow(s, dt, k, opt);
    // Adjacent half steps of the free flow merge into one.
    free_flow(s, n + 1 < steps ? dt : 0.5 * dt, k);
    s.t = state.t + (n + 1) * dt;
    if (!all_finite(s)) throw NumericalError(describe_nonfinite(s));
  }
  return s;
}

EnergyBreakdown total_energy(const SemiclassicalState& state, const Constants& k) {
  EnergyBreakdown e;
  e.electric = 2.0 * pi * k.c * k.c * norm_squared(state.Pi_perp);
  e.magnetic = norm_squared(curl(state.A_perp)) / (8.0 * pi);

  const ComplexVectorField grad = gradient(state.psi);
  double kin = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Eigen::VectorXcd d = complex(0.0, -k.hbar) * grad[a] -
                               (k.charge / k.c) * state.A_perp[a].cast<complex>().cwiseProduct(state.psi.values);
    kin += d.squaredNorm();
  }
  e.kinetic = kin * state.grid().cell_volume() / (2.0 * k.mass);

  const RealScalarField rho = charge_density(state.psi, k);
  e.coulomb = 0.5 * integrate(RealScalarField(rho.grid, rho.values.cwiseProduct(solve_coulomb(rho).values)));
  return e;
}

RealScalarField photon_lagrangian_density(const RealVectorField& A, const RealVectorField& A_dot,
                                          const RealScalarField& V, const Constants& k) {
  const RealVectorField g = gradient(V) + (1.0 / k.c) * A_dot;
  const RealVectorField B = curl(A);
  RealScalarField L(A.grid);
  L.values = (dot(g, g).values - dot(B, B).values) / (8.0 * pi);
  return L;
}

RealScalarField electron_lagrangian_density(const ComplexScalarField& psi, const ComplexScalarField& psi_dot,
                                            const Constants& k) {
  const ComplexVectorField grad = gradient(psi);
  RealScalarField L(psi.grid);
  L.values = -k.hbar * (psi.values.conjugate().cwiseProduct(psi_dot.values)).imag();
  for (int a = 0; a < 3; ++a) L.values -= (k.hbar * k.hbar / (2.0 * k.mass)) * grad[a].cwiseAbs2();
  return L;
}

RealScalarField lagrangian_density(const SemiclassicalState& state, const ComplexScalarField& psi_dot,
                                   const RealVectorField& A_dot, const RealScalarField& V, const Constants& k) {
  const ComplexScalarField& psi = state.psi;
  RealScalarField L = photon_lagrangian_density(state.A_perp, A_dot, V, k);
  const ComplexVectorField grad = gradient(psi);
  for (int a = 0; a < 3; ++a) {
    const Eigen::VectorXcd d = complex(0.0, -k.hbar) * grad[a] -
                               (k.charge / k.c) * state.A_perp[a].cast<complex>().cwiseProduct(psi.values);
    L.values -= d.cwiseAbs2() / (2.0 * k.mass);
  }
  L.values -= k.hbar * (psi.values.conjugate().cwiseProduct(psi_dot.values)).imag();
  L.values -= k.charge * V.values.cwiseProduct(psi.values.cwiseAbs2());
  return L;
}

double legendre_energy(const SemiclassicalState& state, const ComplexScalarField& psi_dot,
                       const RealVectorField& A_dot, const RealScalarField& V, const Constants& k) {
  const RealScalarField L = lagrangian_density(state, psi_dot, A_dot, V, k);
  const RealVectorField pi_A = (1.0 / (4.0 * pi * k.c)) * (gradient(V) + (1.0 / k.c) * A_dot);
  RealScalarField density(state.grid());
  density.values = -L.values + dot(pi_A, A_dot).values;
  // Pi_psi psi_dot + Pi_psi* psi*_dot with Pi_psi = (i hbar/2) psi*
  density.values -= k.hbar * (state.psi.values.conjugate().cwiseProduct(psi_dot.values)).imag();
  return integrate(density);
}

double EulerLagrangeResidual::max_ampere() const { return max_of(ampere); }
double EulerLagrangeResidual::max_gauss() const { return max_of(gauss); }
double EulerLagrangeResidual::max_schrodinger() const { return max_of(schrodinger); }

EulerLagrangeResidual euler_lagrange_residual(const std::vector<SemiclassicalState>& trajectory, double dt,
                                              const Constants& k) {
  if (trajectory.size() < 3) throw std::invalid_argument("Euler-Lagrange residual needs at least three states");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  EulerLagrangeResidual out;
  for (std::size_t n = 1; n + 1 < trajectory.size(); ++n) {
    const SemiclassicalState& prev = trajectory[n - 1];
    const SemiclassicalState& cur = trajectory[n];
    const SemiclassicalState& next = trajectory[n + 1];
    require_same_grid(prev.grid(), cur.grid());
    require_same_grid(next.grid(), cur.grid());
    out.times.push_back(cur.t);

    // curl B - (4 pi / c) P j + (1/c^2) d^2A/dt^2
    const RealVectorField A_ddot = (1.0 / (dt * dt)) * (next.A_perp - 2.0 * cur.A_perp + prev.A_perp);
    const RealVectorField curl_B = curl(curl(cur.A_perp));
    const RealVectorField source =
        (4.0 * pi / k.c) * transverse_project(current_density(cur.psi, cur.A_perp, k), ZeroMode::discard);
    const RealVectorField inertia = (1.0 / (k.c * k.c)) * A_ddot;
    const RealVectorField r_ampere = curl_B - source + inertia;
    const double scale_ampere = std::max({norm(curl_B), norm(source), norm(inertia), residual_floor});
    out.ampere.push_back(norm(r_ampere) / scale_ampere);

    // div E - 4 pi (rho - mean rho); the uniform background neutralizes the
    // mean. Only the modes a divergence can produce are compared.
    const RealScalarField rho = strip_nyquist(charge_density(cur.psi, k));
    const RealScalarField V = solve_coulomb(rho);
    const RealVectorField A_dot = (0.5 / dt) * (next.A_perp - prev.A_perp);
    const RealScalarField div_E = divergence(electric_field(V, A_dot, k));
    RealScalarField r_gauss = div_E;
    r_gauss.values -= 4.0 * pi * (rho.values.array() - rho.values.mean()).matrix();
    const double scale_gauss = std::max({norm(div_E), 4.0 * pi * norm(rho), residual_floor});
    out.gauss.push_back(norm(r_gauss) / scale_gauss);

    const ComplexScalarField fd = (0.5 / dt) * (next.psi - prev.psi);
    const ComplexScalarField rhs = schrodinger_rhs(cur.psi, cur.A_perp, V, k);
    const double scale_schro = std::max({norm(rhs), norm(fd), residual_floor});
    out.schrodinger.push_back(norm(fd - rhs) / scale_schro);
  }
  return out;
}

}  // namespace nrqed
