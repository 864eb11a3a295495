#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace nrqed {

/// Integer lattice coordinates m of a wavevector k = (2 pi / L) m.
using LatticeVector = Eigen::Vector3i;

struct PhotonMode {
  LatticeVector m;
  Eigen::Vector3d q;
  std::array<Eigen::Vector3d, 2> polarization;
};

/// Photon modes of a periodic box, ordered lexicographically by m. Every q
/// appears with -q, and the pair shares its polarization vectors.
struct ModeSet {
  double box_length = 0.0;
  double q_cutoff = 0.0;
  std::vector<PhotonMode> modes;

  int size() const { return static_cast<int>(modes.size()); }
  /// Oscillators are (mode, polarization) pairs; slot = 2 * mode + lambda.
  int slot_count() const { return 2 * size(); }
  std::optional<int> find(const LatticeVector& m) const;
  int partner(int mode) const;
  std::uint64_t hash() const;
};

/// True when m is the canonical member of the pair {m, -m}: its first
/// nonzero component is positive.
bool lexicographically_positive(const LatticeVector& m);

/// All nonzero lattice wavevectors with |q| <= q_cutoff. Throws
/// std::invalid_argument if none fits.
ModeSet build_modes(double box_length, double q_cutoff);

/// Rotates (e1, e2) -> (e1 cos t + e2 sin t, -e1 sin t + e2 cos t) with
/// t = angle(m) evaluated on the canonical member of each pair.
ModeSet rotate_polarizations(const ModeSet& modes, const std::function<double(const LatticeVector&)>& angle);

/// Plane-wave orbitals with |k| <= k_cutoff, ordered lexicographically by m.
std::vector<LatticeVector> plane_wave_orbitals(double box_length, double k_cutoff);

class DimensionError : public std::runtime_error {
 public:
  DimensionError(Eigen::Index dimension, Eigen::Index cap);
  Eigen::Index dimension() const { return dimension_; }

 private:
  Eigen::Index dimension_;
};

struct SectorSpec {
  int n_max = 1;         // occupation cap per photon oscillator
  int n_ph_max = 1;      // cap on the total photon number
  double k_cutoff = 0.0;
  int n_electrons = 1;   // 0, 1 or 2 (0 only serves ladder-operator checks)
  std::optional<LatticeVector> total_momentum;
  Eigen::Index max_dimension = 4'000'000;
};

/// Truncated Fock space of spinless electrons in plane-wave orbitals and
/// photons in the oscillators of a ModeSet. Basis order: electron
/// configuration major (lexicographic in orbital index), photon occupation
/// minor (colexicographic).
class FockSector {
 public:
  FockSector(const ModeSet& modes, const SectorSpec& spec);

  Eigen::Index dimension() const { return static_cast<Eigen::Index>(states_.size()); }
  const SectorSpec& spec() const { return spec_; }
  double box_length() const { return box_length_; }
  std::uint64_t mode_hash() const { return mode_hash_; }
  std::uint64_t hash() const;

  const std::vector<LatticeVector>& orbitals() const { return orbitals_; }
  int orbital_count() const { return static_cast<int>(orbitals_.size()); }
  std::optional<int> find_orbital(const LatticeVector& m) const;
  int slot_count() const { return slots_; }
  const LatticeVector& slot_momentum(int slot) const { return slot_m_[static_cast<std::size_t>(slot)]; }

  /// Sorted orbital indices of the electrons in basis state i.
  std::span<const int> electrons(Eigen::Index i) const;
  /// Occupation of every photon slot in basis state i.
  std::span<const std::uint8_t> photons(Eigen::Index i) const;
  LatticeVector momentum(Eigen::Index i) const;

  /// Index of the basis state, or nullopt if it lies outside the sector.
  std::optional<Eigen::Index> find(std::span<const int> electrons, std::span<const std::uint8_t> photons) const;

 private:
  SectorSpec spec_;
  double box_length_;
  std::uint64_t mode_hash_;
  int slots_;
  std::vector<LatticeVector> orbitals_;
  std::vector<LatticeVector> slot_m_;
  std::unordered_map<std::int64_t, int> orbital_index_;
  std::vector<int> configs_;             // n_electrons per configuration
  std::vector<std::uint8_t> comps_;      // slots_ per composition
  std::vector<std::pair<int, int>> states_;
  std::unordered_map<std::int64_t, int> config_index_;
  std::unordered_map<std::string, int> comp_index_;
  std::unordered_map<std::int64_t, Eigen::Index> state_index_;

  std::int64_t config_key(std::span<const int> electrons) const;
};

FockSector enumerate_sector(const ModeSet& modes, int n_max, int n_ph_max, double k_cutoff, int n_electrons,
                            std::optional<LatticeVector> total_momentum = std::nullopt,
                            Eigen::Index max_dimension = SectorSpec{}.max_dimension);

enum class Ladder { create, annihilate };

/// Matrix of b or b^+ for one photon slot. Results outside the sector
/// (occupation or total-number cap exceeded) are dropped.
Eigen::SparseMatrix<double> photon_ladder_matrix(const FockSector& sector, int slot, Ladder kind);

/// b_{q,lambda} or b^+_{q,lambda} applied to a state vector of an
/// unrestricted-momentum sector. Throws std::invalid_argument for an unknown
/// mode or polarization, or a momentum-restricted sector.
Eigen::VectorXcd apply_ladder(const FockSector& sector, const Eigen::VectorXcd& v, int mode, int lambda, Ladder kind);

/// a_k (from N to N-1 electrons) or a^+_k (N to N+1) as a map between two
/// sectors over the same modes. Signs follow the orbital ordering.
Eigen::SparseMatrix<double> electron_ladder_matrix(const FockSector& from, const FockSector& to, int orbital,
                                                   Ladder kind);

/// Fermionic a_o on a sorted occupation list; returns the sign, or 0 if o is empty.
int annihilate_orbital(std::vector<int>& occupied, int orbital);
/// Fermionic a^+_o; returns the sign, or 0 if o is occupied.
int create_orbital(std::vector<int>& occupied, int orbital);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace nrqed
