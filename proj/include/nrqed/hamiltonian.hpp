#pragma once

#include "nrqed/constants.hpp"
#include "nrqed/modes.hpp"

#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <iosfwd>

namespace nrqed {

/// Hermitian operator on a FockSector, upper triangle stored (row <= col).
struct SparseHamiltonian {
  Eigen::Index dimension = 0;
  Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor> upper;
  /// Largest |H_ij - conj(H_ji)| among the generated elements, before the
  /// lower triangle was discarded.
  double hermiticity_defect = 0.0;
  std::uint64_t sector_hash = 0;
  Constants constants;

  /// Both triangles.
  Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor> full() const;
  std::complex<double> coeff(Eigen::Index row, Eigen::Index col) const;
  double one_norm() const;
};

SparseHamiltonian operator+(const SparseHamiltonian& a, const SparseHamiltonian& b);

/// Diagonal  sum_{q,lambda} hbar c |q| n_{q,lambda}.
SparseHamiltonian build_photon_energy(const FockSector& sector, const ModeSet& modes, const Constants& k);

/// Diagonal  sum over occupied orbitals of hbar^2 k^2 / 2m.
SparseHamiltonian build_electron_kinetic(const FockSector& sector, const Constants& k);

/// Normal-ordered  -(e/mc) A.p + (e^2 / 2mc^2) A^2  with
///   A(x) = sum_{q,lambda} sqrt(hbar c / (Omega |q|)) e_{q,lambda} e^{i q.x} (b_{q,lambda} + b^+_{-q,lambda}).
/// Photon label q carries momentum +hbar q. Throws std::invalid_argument
/// when the sector was built on a different mode set.
SparseHamiltonian build_minimal_coupling(const FockSector& sector, const ModeSet& modes, const Constants& k,
                                         int workers = 1);

/// (1/2) sum_{k1,k2,kappa != 0} (4 pi e^2 / (Omega kappa^2)) a^+_{k1+kappa} a^+_{k2-kappa} a_{k2} a_{k1}.
/// Identically zero below two electrons.
SparseHamiltonian build_coulomb(const FockSector& sector, const Constants& k, int workers = 1);

/// Sum of the four terms above.
SparseHamiltonian assemble_h_qed(const FockSector& sector, const ModeSet& modes, const Constants& k, int workers = 1);

/// Text export: a '#' header with dimension, sector hash and entry count,
/// then one `row col re im` line per stored upper-triangle entry.
void export_matrix(std::ostream& os, const SparseHamiltonian& h);

}  // namespace nrqed
