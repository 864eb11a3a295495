#pragma once

#include "nrqed/constants.hpp"
#include "nrqed/modes.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace nrqed {

class ConfigError : public std::runtime_error {
  using runtime_error::runtime_error;
};

struct GridConfig {
  int n = 16;
  double box_length = 6.283185307179586;
};

struct ModesConfig {
  double q_cutoff = 1.0;
  int n_max = 2;
  int n_ph_max = 2;
  double k_cutoff = 1.0;
  int n_electrons = 1;
  std::optional<double> box_length;  // must match [grid] when given
};

struct DynamicsConfig {
  double dt = 1e-3;
  int steps = 100;
  int output_every = 10;
  std::uint64_t seed = 1;
  int psi_band = 2;        // initial psi: random, |m| <= psi_band per axis
  int a_band = 1;          // initial A_perp: random transverse, |m| <= a_band
  double a_amplitude = 10.0;
  int snapshot_every = 0;  // 0 disables snapshots
  std::string snapshot_dir = "snapshots";
  bool dealias = false;
};

struct SpectrumConfig {
  int n_eigs = 4;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::optional<LatticeVector> momentum_block = LatticeVector(1, 0, 0);  // nullopt: whole sector
  int max_iter = 2000;
  long long max_dimension = 4'000'000;
};

/// INI-style run configuration with sections [grid], [constants], [modes],
/// [dynamics] and [spectrum]. Missing keys keep their defaults.
struct Config {
  GridConfig grid;
  Constants constants;
  ModesConfig modes;
  DynamicsConfig dynamics;
  SpectrumConfig spectrum;

  SectorSpec sector_spec() const;
};

/// Throws ConfigError naming the offending section, key or value.
Config parse_config(std::istream& in);
Config load_config(const std::filesystem::path& path);

/// Range checks and lattice consistency: mode and orbital cutoffs must lie
/// between the smallest lattice wavevector and the largest one the grid
/// resolves, and a [modes] box_length, if given, must equal the grid's.
void validate(const Config& config);

/// The configuration as INI text, every value at full precision.
std::string to_ini(const Config& config);

}  // namespace nrqed
