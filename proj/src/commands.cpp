#include "nrqed/commands.hpp"

#include "nrqed/format.hpp"
#include "nrqed/hamiltonian.hpp"
#include "nrqed/random_fields.hpp"
#include "nrqed/snapshot.hpp"
#include "nrqed/sources.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>

namespace nrqed {

namespace {

std::string step_name(const std::string& field, int step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s_%08d.snap", field.c_str(), step);
  return buf;
}

void write_snapshots(const Config& config, const SemiclassicalState& s, int step) {
  const std::filesystem::path dir = config.dynamics.snapshot_dir;
  std::filesystem::create_directories(dir);
  write_snapshot(dir / step_name("psi", step), s.psi, s.t);
  write_snapshot(dir / step_name("A", step), s.A_perp, s.t);
  write_snapshot(dir / step_name("Pi", step), s.Pi_perp, s.t);
}

void write_row(std::ostream& out, const SemiclassicalState& s, const Constants& k) {
  const EnergyBreakdown e = total_energy(s, k);
  const double norm2 = norm_squared(s.psi);
  const double continuity = continuity_residual(s.psi, s.A_perp, coulomb_potential(s.psi, k), k).relative_norm;
  const double row[] = {s.t, e.total(), e.field(), e.kinetic, e.coulomb, norm2, continuity};
  for (std::size_t i = 0; i < std::size(row); ++i) {
    if (!std::isfinite(row[i])) throw NumericalError("non-finite diagnostic at t = " + format_double(s.t));
    out << (i ? " " : "") << format_double(row[i]);
  }
  out << '\n';
}

}  // namespace

SemiclassicalState initial_state(const Config& config) {
  const Grid3 grid(config.grid.n, config.grid.box_length);
  const auto& d = config.dynamics;
  auto psi = normalized(random_complex_field(grid, d.psi_band, d.seed));
  RealVectorField A(grid);
  if (d.a_amplitude > 0.0) {
    A = random_transverse_field(grid, d.a_band, d.seed + 1);
    double peak = 0.0;
    for (int a = 0; a < 3; ++a) peak = std::max(peak, A[a].cwiseAbs().maxCoeff());
    A = (d.a_amplitude / peak) * A;
  }
  return SemiclassicalState(std::move(psi), std::move(A), RealVectorField(grid));
}

void run_evolve(const Config& config, std::ostream& out) {
  const auto& d = config.dynamics;
  const Constants& k = config.constants;
  StepOptions options;
  options.dealias = d.dealias;
  SemiclassicalState s = initial_state(config);
  out << "# t total_energy field_energy kinetic coulomb norm continuity_residual\n";
  write_row(out, s, k);
  if (d.snapshot_every > 0) write_snapshots(config, s, 0);
  int done = 0;
  while (done < d.steps) {
    int next = std::min(d.steps, (done / d.output_every + 1) * d.output_every);
    if (d.snapshot_every > 0) next = std::min(next, (done / d.snapshot_every + 1) * d.snapshot_every);
    s = evolve(s, d.dt, next - done, k, options);
    done = next;
    if (done % d.output_every == 0 || done == d.steps) write_row(out, s, k);
    if (d.snapshot_every > 0 && done % d.snapshot_every == 0) write_snapshots(config, s, done);
  }
}

SpectrumRun run_spectrum(const Config& config, int workers) {
  const ModeSet modes = build_modes(config.grid.box_length, config.modes.q_cutoff);
  const FockSector sector(modes, config.sector_spec());
  const SparseHamiltonian h = assemble_h_qed(sector, modes, config.constants, workers);
  SpectrumRun run;
  run.dimension = h.dimension;
  if (h.dimension == 0) throw NumericalError("the configured sector is empty");
  const int n = static_cast<int>(std::min<Eigen::Index>(config.spectrum.n_eigs, h.dimension));
  if (h.dimension <= config.spectrum.n_eigs) {
    run.eigenvalues = dense_eigenvalues(h).head(n);
    run.residuals.assign(static_cast<std::size_t>(n), 0.0);
    run.dense = true;
    return run;
  }
  const auto r = lanczos(h, n, config.spectrum.tol, config.spectrum.max_iter, config.spectrum.seed, false, workers);
  run.eigenvalues = r.eigenvalues;
  run.residuals = r.residuals;
  return run;
}

void write_spectrum(std::ostream& out, const SpectrumRun& run) {
  for (Eigen::Index i = 0; i < run.eigenvalues.size(); ++i) out << format_double(run.eigenvalues[i]) << '\n';
}

void write_modes(std::ostream& out, const Config& config) {
  const ModeSet modes = build_modes(config.grid.box_length, config.modes.q_cutoff);
  out << "# qx qy qz |q| omega e1x e1y e1z e2x e2y e2z\n";
  for (const auto& p : modes.modes) {
    const double values[] = {p.q.x(),
                             p.q.y(),
                             p.q.z(),
                             p.q.norm(),
                             config.constants.c * p.q.norm(),
                             p.polarization[0].x(),
                             p.polarization[0].y(),
                             p.polarization[0].z(),
                             p.polarization[1].x(),
                             p.polarization[1].y(),
                             p.polarization[1].z()};
    for (std::size_t i = 0; i < std::size(values); ++i) out << (i ? " " : "") << format_double(values[i]);
    out << '\n';
  }
}

void run_export(const Config& config, std::ostream& out, int workers) {
  const ModeSet modes = build_modes(config.grid.box_length, config.modes.q_cutoff);
  const FockSector sector(modes, config.sector_spec());
  export_matrix(out, assemble_h_qed(sector, modes, config.constants, workers));
}

void write_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
  std::size_t width = 4;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    out << c.name << std::string(width + 2 - c.name.size(), ' ') << (c.passed ? "PASS" : "FAIL") << "  "
        << format_double(c.value) << " <= " << format_double(c.threshold) << '\n';
  }
}

}  // namespace nrqed
