#include "nrqed/commands.hpp"

#include "nrqed/hamiltonian.hpp"
#include "nrqed/random_fields.hpp"
#include "nrqed/sources.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nrqed {

namespace {

constexpr double pi = std::numbers::pi;

template <typename S>
double rel(const VectorField<S>& a, const VectorField<S>& b) {
  return norm(a - b) / std::max({norm(a), norm(b), 1e-300});
}
template <typename S>
double rel(const ScalarField<S>& a, const ScalarField<S>& b) {
  return norm(a - b) / std::max({norm(a), norm(b), 1e-300});
}

long long compositions(int slots, int n_max, int n_ph) {
  std::vector<long long> ways(static_cast<std::size_t>(n_ph) + 1, 0);
  ways[0] = 1;
  for (int s = 0; s < slots; ++s) {
    std::vector<long long> next(ways.size(), 0);
    for (int t = 0; t <= n_ph; ++t)
      for (int n = 0; n <= n_max && t + n <= n_ph; ++n)
        next[static_cast<std::size_t>(t + n)] += ways[static_cast<std::size_t>(t)];
    ways = std::move(next);
  }
  long long total = 0;
  for (long long w : ways) total += w;
  return total;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// The configured sector, restricted to one momentum block and with the
// photon-number cap lowered until dense diagonalization is affordable.
SectorSpec dense_spec(const Config& config, const ModeSet& modes, Eigen::Index limit) {
  SectorSpec spec = config.sector_spec();
  if (!spec.total_momentum) spec.total_momentum = LatticeVector(0, 0, 0);
  spec.max_dimension = std::numeric_limits<Eigen::Index>::max();
  while (spec.n_ph_max > 0 && FockSector(modes, spec).dimension() > limit) --spec.n_ph_max;
  return spec;
}

}  // namespace

std::vector<CheckResult> run_verify(const Config& config, int workers) {
  std::vector<CheckResult> out;
  auto record = [&](std::string name, double value, double threshold) {
    out.push_back({std::move(name), value, threshold, std::isfinite(value) && value <= threshold});
  };
  const Constants& k = config.constants;
  const Grid3 grid(config.grid.n, config.grid.box_length);
  const auto& d = config.dynamics;

  // fields
  {
    const auto v = random_vector_field(grid, d.a_band, d.seed + 10);
    const auto p = transverse_project(v);
    record("grid.projector_idempotent", rel(transverse_project(p), p), 1e-13);
    record("grid.projector_divergence", relative_divergence(p), 1e-13);
    auto rho = random_real_field(grid, d.psi_band, d.seed + 11);
    rho.values.array() += 0.3;
    auto residual = laplacian(solve_coulomb(rho));
    residual.values += 4 * pi * (rho.values.array() - rho.values.mean()).matrix();
    record("grid.coulomb_poisson", norm(residual) / (4 * pi * norm(rho)), 1e-11);
  }

  // sources
  {
    const auto psi = normalized(random_complex_field(grid, d.psi_band, d.seed + 20));
    const auto A = random_transverse_field(grid, d.a_band, d.seed + 21, std::max(d.a_amplitude, 1.0));
    const auto V = random_real_field(grid, d.psi_band, d.seed + 22, 0.5);
    record("sources.continuity", continuity_residual(psi, A, V, k).relative_norm, 1e-8);

    // |e chi / hbar c| <= 0.01 keeps the gauge phase resolved on coarse grids
    const double amp = k.charge == 0.0 ? 1.0 : 0.01 * k.hbar * k.c / std::abs(k.charge);
    const auto chi = random_real_field(grid, 1, d.seed + 23, amp);
    const auto chi_dot = random_real_field(grid, 1, d.seed + 24, amp);
    const auto g = gauge_transform(V, A, psi, chi, chi_dot, k);
    const auto A_dot = random_transverse_field(grid, d.a_band, d.seed + 25, 1.0);
    double worst = rel(charge_density(g.psi, k), charge_density(psi, k));
    worst = std::max(worst, rel(current_density(g.psi, g.A, k), current_density(psi, A, k)));
    worst = std::max(worst, rel(magnetic_field(g.A), magnetic_field(A)));
    worst = std::max(worst, rel(electric_field(g.V, A_dot - gradient(chi_dot), k), electric_field(V, A_dot, k)));
    record("sources.gauge_invariance", worst, 1e-9);
    const auto chi2 = random_real_field(grid, 1, d.seed + 26, amp);
    const auto twice = gauge_transform(g.V, g.A, g.psi, chi2, chi_dot, k);
    const auto once = gauge_transform(V, A, psi, chi + chi2, chi_dot + chi_dot, k);
    record("sources.gauge_composition",
           std::max({rel(twice.V, once.V), rel(twice.A, once.A), rel(twice.psi, once.psi)}), 1e-12);
  }

  // semiclassical dynamics
  {
    const SemiclassicalState s = initial_state(config);
    StepOptions options;
    options.dealias = d.dealias;
    const double e0 = total_energy(s, k).total();
    double norm_drift = 0.0, energy_drift = 0.0;
    SemiclassicalState x = s;
    std::vector<SemiclassicalState> first{s};
    for (int n = 0; n < 100; n += 10) {
      if (n == 0) {
        first.push_back(step(x, d.dt, k, options));
        first.push_back(step(first.back(), d.dt, k, options));
      }
      x = evolve(x, d.dt, 10, k, options);
      norm_drift = std::max(norm_drift, std::abs(norm_squared(x.psi) - norm_squared(s.psi)));
      energy_drift = std::max(energy_drift, std::abs(total_energy(x, k).total() - e0) / std::abs(e0));
    }
    record("dynamics.norm_drift_100_steps", norm_drift, 1e-10);
    record("dynamics.energy_drift_100_steps", energy_drift, 1e-6);
    record("dynamics.gauss_residual", euler_lagrange_residual(first, d.dt, k).max_gauss(), 1e-10);

    // one free mode over one period
    const Constants neutral = k.with_charge(0.0);
    const Eigen::Vector3d q(grid.fundamental_wavenumber(), 0.0, 0.0);
    RealVectorField A(grid);
    for (int iz = 0; iz < grid.nz(); ++iz)
      for (int iy = 0; iy < grid.ny(); ++iy)
        for (int ix = 0; ix < grid.nx(); ++ix) A[1][grid.index(ix, iy, iz)] = std::cos(q.dot(grid.position(ix, iy, iz)));
    const SemiclassicalState wave(ComplexScalarField(grid), A, RealVectorField(grid));
    const double period = 2 * pi / (k.c * q.norm());
    const auto back = evolve(wave, period / 64, 64, neutral);
    record("dynamics.oscillator_period", rel(back.A_perp, wave.A_perp), 1e-8);
  }

  // photon modes and Fock space
  const ModeSet modes = build_modes(config.grid.box_length, config.modes.q_cutoff);
  {
    double worst = 0.0;
    for (int i = 0; i < modes.size(); ++i) {
      const auto& p = modes.modes[static_cast<std::size_t>(i)];
      const auto& e = p.polarization;
      worst = std::max({worst, (std::abs(p.q.dot(e[0])) + std::abs(p.q.dot(e[1]))) / p.q.norm(),
                        std::abs(e[0].norm() - 1.0), std::abs(e[1].norm() - 1.0), std::abs(e[0].dot(e[1]))});
      const auto& r = modes.modes[static_cast<std::size_t>(modes.partner(i))];
      if (r.polarization[0] != e[0] || r.polarization[1] != e[1] || r.m != -p.m) worst = 1.0;
    }
    record("modes.polarization_constraints", worst, 1e-14);

    SectorSpec small{};
    small.n_max = std::min(config.modes.n_max, 2);
    small.n_ph_max = std::min(config.modes.n_ph_max, 2);
    small.k_cutoff = config.modes.k_cutoff;
    small.n_electrons = config.modes.n_electrons;
    const FockSector s(modes, small);
    const long long expect = binomial(s.orbital_count(), small.n_electrons) *
                             compositions(modes.slot_count(), small.n_max, small.n_ph_max);
    double bijection = std::abs(static_cast<double>(s.dimension() - expect));
    for (Eigen::Index i = 0; i < s.dimension(); ++i) {
      const auto back = s.find(s.electrons(i), s.photons(i));
      if (!back || *back != i) bijection += 1.0;
    }
    record("modes.sector_enumeration", bijection, 0.0);

    // [b, b^+] = 1 on states below the occupation cap of the slot
    SectorSpec ladder = small;
    ladder.n_max = 2;
    ladder.n_ph_max = 2 * modes.slot_count();
    ladder.k_cutoff = 0.0;
    ladder.n_electrons = 1;
    ModeSet pair = modes;
    pair.modes.resize(2);  // +-q of the first canonical pair
    pair.modes[0] = modes.modes[0];
    pair.modes[1] = modes.modes[static_cast<std::size_t>(modes.partner(0))];
    const FockSector ls(pair, ladder);
    double defect = 0.0;
    for (int a = 0; a < ls.slot_count(); ++a) {
      const Eigen::MatrixXd b = photon_ladder_matrix(ls, a, Ladder::annihilate);
      const Eigen::MatrixXd bd = photon_ladder_matrix(ls, a, Ladder::create);
      defect = std::max(defect, (bd - b.transpose()).cwiseAbs().maxCoeff());
      const Eigen::MatrixXd comm = b * bd - bd * b;
      for (Eigen::Index j = 0; j < ls.dimension(); ++j)
        if (ls.photons(j)[static_cast<std::size_t>(a)] < ladder.n_max)
          for (Eigen::Index i = 0; i < ls.dimension(); ++i)
            defect = std::max(defect, std::abs(comm(i, j) - (i == j ? 1.0 : 0.0)));
    }
    record("modes.ladder_commutator", defect, 1e-14);
  }

  // Hamiltonian
  {
    SectorSpec open = config.sector_spec();
    open.total_momentum.reset();
    open.max_dimension = std::numeric_limits<Eigen::Index>::max();
    while (open.n_ph_max > 0 && FockSector(modes, open).dimension() > 20000) --open.n_ph_max;
    const FockSector s(modes, open);
    const SparseHamiltonian h = assemble_h_qed(s, modes, k, workers);
    record("hamiltonian.hermiticity", h.hermiticity_defect, 1e-14);
    double crossings = 0.0;
    for (Eigen::Index r = 0; r < h.upper.outerSize(); ++r)
      for (decltype(h.upper)::InnerIterator it(h.upper, r); it; ++it)
        if (s.momentum(it.row()) != s.momentum(it.col())) crossings += 1.0;
    record("hamiltonian.momentum_block_crossings", crossings, 0.0);

    SectorSpec single = open;
    single.n_electrons = 1;
    record("hamiltonian.single_electron_coulomb_entries",
           static_cast<double>(build_coulomb(FockSector(modes, single), k, workers).upper.nonZeros()), 0.0);

    const FockSector block(modes, dense_spec(config, modes, 2000));
    const Constants free = k.with_charge(0.0);
    std::vector<double> closed;
    for (Eigen::Index i = 0; i < block.dimension(); ++i) {
      double e = 0.0;
      for (int sl = 0; sl < block.slot_count(); ++sl)
        e += free.hbar * free.c * modes.modes[static_cast<std::size_t>(sl / 2)].q.norm() * block.photons(i)[static_cast<std::size_t>(sl)];
      const double k0 = 2 * pi / config.grid.box_length;
      for (int o : block.electrons(i))
        e += free.hbar * free.hbar * k0 * k0 * block.orbitals()[static_cast<std::size_t>(o)].squaredNorm() / (2 * free.mass);
      closed.push_back(e);
    }
    std::sort(closed.begin(), closed.end());
    const Eigen::VectorXd eig = dense_eigenvalues(assemble_h_qed(block, modes, free, workers));
    double worst = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i)
      worst = std::max(worst, std::abs(eig[i] - closed[static_cast<std::size_t>(i)]) / std::max(1.0, std::abs(closed[static_cast<std::size_t>(i)])));
    record("hamiltonian.decoupled_spectrum", worst, 1e-12);

    // polarization rotation; n_max = N_ph keeps the truncated space invariant
    SectorSpec rot = dense_spec(config, modes, 2000);
    rot.n_max = rot.n_ph_max;
    while (rot.n_ph_max > 0 && FockSector(modes, rot).dimension() > 2000) rot.n_max = --rot.n_ph_max;
    const ModeSet turned = rotate_polarizations(modes, [](const LatticeVector& m) { return 0.7 * m.x() - 0.4 * m.y() + 1.1 * m.z() + 0.3; });
    const Eigen::VectorXd ea = dense_eigenvalues(assemble_h_qed(FockSector(modes, rot), modes, k, workers));
    const Eigen::VectorXd eb = dense_eigenvalues(assemble_h_qed(FockSector(turned, rot), turned, k, workers));
    record("hamiltonian.polarization_rotation", (ea - eb).cwiseAbs().maxCoeff(), 1e-10);

    // Lanczos against dense on the same block
    const SparseHamiltonian hb = assemble_h_qed(block, modes, k, workers);
    const Eigen::VectorXd dense = dense_eigenvalues(hb);
    const int n = static_cast<int>(std::min<Eigen::Index>(config.spectrum.n_eigs, hb.dimension - 1));
    double lanczos_error = 0.0;
    if (n >= 1) {
      const auto r = lanczos(hb, n, 1e-12, std::max(config.spectrum.max_iter, 1000), config.spectrum.seed, false, workers);
      lanczos_error = (r.eigenvalues - dense.head(n)).cwiseAbs().maxCoeff();
    }
    record("eigensolver.lanczos_vs_dense", lanczos_error, 1e-10);
  }

  // second-order perturbation theory on [[0, v], [v, 1]]: exact - PT2 = v^4 + O(v^6)
  {
    const double v0 = 1e-2;
    SparseHamiltonian v;
    v.dimension = 2;
    v.upper.resize(2, 2);
    v.upper.insert(0, 1) = v0;
    v.upper.makeCompressed();
    const double shift = second_order_shift(Eigen::Vector2d(0.0, 1.0), v, 0);
    const double exact = 0.5 - std::sqrt(0.25 + v0 * v0);
    record("eigensolver.second_order_two_level", std::abs((exact - shift) / std::pow(v0, 4) - 1.0), 1e-3);
  }
  return out;
}

}  // namespace nrqed
