#pragma once

// Library side of the command-line tool: each command writes to a stream so
// that it can be driven from tests as well as from main().

#include "nrqed/config.hpp"
#include "nrqed/dynamics.hpp"
#include "nrqed/eigensolver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nrqed {

/// psi: normalized random band-limited field (psi_band, seed).
/// A_perp: random transverse field (a_band, seed + 1) scaled to max |A| = a_amplitude.
/// Pi_perp: zero.
SemiclassicalState initial_state(const Config& config);

/// `# t total_energy field_energy kinetic coulomb norm continuity_residual`
/// then one row every output_every steps, starting at t = 0. Snapshots of
/// psi, A_perp and Pi_perp go to snapshot_dir every snapshot_every steps.
/// Throws NumericalError when a diagnostic turns non-finite.
void run_evolve(const Config& config, std::ostream& out);

struct SpectrumRun {
  Eigen::Index dimension = 0;
  Eigen::VectorXd eigenvalues;
  std::vector<double> residuals;
  bool dense = false;  // true when the sector was too small for Lanczos
};

/// Lowest n_eigs eigenvalues of H^QED on the configured sector.
SpectrumRun run_spectrum(const Config& config, int workers = 1);
void write_spectrum(std::ostream& out, const SpectrumRun& run);

/// `qx qy qz |q| omega e1x e1y e1z e2x e2y e2z`, one line per mode.
void write_modes(std::ostream& out, const Config& config);

void run_export(const Config& config, std::ostream& out, int workers = 1);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// The invariant suite run by `verify`, on problems derived from config.
std::vector<CheckResult> run_verify(const Config& config, int workers = 1);
void write_checks(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace nrqed
