#include "nrqed/hamiltonian.hpp"

#include "nrqed/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <thread>

namespace nrqed {

namespace {

constexpr double pi = std::numbers::pi;
using Column = std::vector<std::pair<Eigen::Index, double>>;

// Generates every column  H|j>  independently, merges duplicate rows in
// generation order, and keeps the upper triangle. Columns are split into
// contiguous chunks per worker, so the result does not depend on `workers`.
template <typename Fn>
SparseHamiltonian assemble_columns(const FockSector& sector, const Constants& k, int workers, Fn&& column) {
  const Eigen::Index n = sector.dimension();
  std::vector<Column> cols(static_cast<std::size_t>(n));
  auto run = [&](Eigen::Index begin, Eigen::Index end) {
    Column buf;
    for (Eigen::Index j = begin; j < end; ++j) {
      buf.clear();
      column(j, buf);
      std::stable_sort(buf.begin(), buf.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      Column& out = cols[static_cast<std::size_t>(j)];
      for (const auto& [row, v] : buf) {
        if (!out.empty() && out.back().first == row)
          out.back().second += v;
        else
          out.emplace_back(row, v);
      }
      std::erase_if(out, [](const auto& e) { return e.second == 0.0; });
    }
  };
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(std::max<Eigen::Index>(n, 1))));
  if (w == 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < w; ++t) pool.emplace_back(run, n * t / w, n * (t + 1) / w);
    for (auto& th : pool) th.join();
  }

  Eigen::SparseMatrix<double> full(n, n);
  Eigen::VectorXi per_col(n);
  for (Eigen::Index j = 0; j < n; ++j) per_col[j] = static_cast<int>(cols[static_cast<std::size_t>(j)].size());
  full.reserve(per_col);
  for (Eigen::Index j = 0; j < n; ++j)
    for (const auto& [row, v] : cols[static_cast<std::size_t>(j)]) full.insert(row, j) = v;
  full.makeCompressed();

  SparseHamiltonian h;
  h.dimension = n;
  h.sector_hash = sector.hash();
  h.constants = k;
  const Eigen::SparseMatrix<double> transposed = full.transpose();
  const Eigen::SparseMatrix<double> diff = full - transposed;
  for (Eigen::Index c = 0; c < diff.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, c); it; ++it)
      h.hermiticity_defect = std::max(h.hermiticity_defect, std::abs(it.value()));
  h.upper = Eigen::SparseMatrix<double>(full.triangularView<Eigen::Upper>()).cast<std::complex<double>>();
  h.upper.makeCompressed();
  return h;
}

SparseHamiltonian diagonal(const FockSector& sector, const Constants& k, const std::function<double(Eigen::Index)>& d) {
  return assemble_columns(sector, k, 1, [&](Eigen::Index j, Column& out) { out.emplace_back(j, d(j)); });
}

void require_modes(const FockSector& sector, const ModeSet& modes) {
  if (sector.mode_hash() != modes.hash() || sector.box_length() != modes.box_length)
    throw std::invalid_argument("sector was built on a different mode set or box");
}

}  // namespace

Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor> SparseHamiltonian::full() const {
  using Mat = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;
  Mat strict = upper.triangularView<Eigen::StrictlyUpper>();
  Mat lower = strict.adjoint();
  return upper + lower;
}

std::complex<double> SparseHamiltonian::coeff(Eigen::Index row, Eigen::Index col) const {
  return row <= col ? upper.coeff(row, col) : std::conj(upper.coeff(col, row));
}

double SparseHamiltonian::one_norm() const {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(dimension);
  for (Eigen::Index r = 0; r < upper.outerSize(); ++r)
    for (decltype(upper)::InnerIterator it(upper, r); it; ++it) {
      sums[it.col()] += std::abs(it.value());
      if (it.col() != r) sums[r] += std::abs(it.value());
    }
  return dimension == 0 ? 0.0 : sums.maxCoeff();
}

SparseHamiltonian operator+(const SparseHamiltonian& a, const SparseHamiltonian& b) {
  if (a.dimension != b.dimension || a.sector_hash != b.sector_hash)
    throw std::invalid_argument("Hamiltonians act on different sectors");
  SparseHamiltonian h = a;
  h.upper = a.upper + b.upper;
  h.upper.prune(std::complex<double>(0.0));
  h.hermiticity_defect = std::max(a.hermiticity_defect, b.hermiticity_defect);
  return h;
}

SparseHamiltonian build_photon_energy(const FockSector& sector, const ModeSet& modes, const Constants& k) {
  require_modes(sector, modes);
  std::vector<double> omega;
  for (int s = 0; s < sector.slot_count(); ++s)
    omega.push_back(k.hbar * k.c * modes.modes[static_cast<std::size_t>(s / 2)].q.norm());
  return diagonal(sector, k, [&](Eigen::Index j) {
    const auto ph = sector.photons(j);
    double e = 0.0;
    for (int s = 0; s < sector.slot_count(); ++s) e += omega[static_cast<std::size_t>(s)] * ph[static_cast<std::size_t>(s)];
    return e;
  });
}

SparseHamiltonian build_electron_kinetic(const FockSector& sector, const Constants& k) {
  const double k0 = 2.0 * pi / sector.box_length();
  return diagonal(sector, k, [&](Eigen::Index j) {
    double e = 0.0;
    for (int o : sector.electrons(j)) {
      const double k2 = k0 * k0 * static_cast<double>(sector.orbitals()[static_cast<std::size_t>(o)].squaredNorm());
      e += k.hbar * k.hbar * k2 / (2.0 * k.mass);
    }
    return e;
  });
}

SparseHamiltonian build_minimal_coupling(const FockSector& sector, const ModeSet& modes, const Constants& k,
                                         int workers) {
  require_modes(sector, modes);
  const int slots = sector.slot_count();
  const double k0 = 2.0 * pi / sector.box_length();
  const double omega_box = std::pow(sector.box_length(), 3);
  std::vector<double> amp(static_cast<std::size_t>(slots));
  std::vector<Eigen::Vector3d> pol(static_cast<std::size_t>(slots));
  for (int s = 0; s < slots; ++s) {
    const PhotonMode& p = modes.modes[static_cast<std::size_t>(s / 2)];
    amp[static_cast<std::size_t>(s)] = std::sqrt(k.hbar * k.c / (omega_box * p.q.norm()));
    pol[static_cast<std::size_t>(s)] = p.polarization[static_cast<std::size_t>(s % 2)];
  }
  const double linear = -k.charge / (k.mass * k.c);
  const double quadratic = k.charge * k.charge / (2.0 * k.mass * k.c * k.c);

  return assemble_columns(sector, k, workers, [&](Eigen::Index j, Column& out) {
    if (k.charge == 0.0) return;
    const auto src_e = sector.electrons(j);
    const auto src_p = sector.photons(j);
    std::vector<int> occ;
    std::vector<std::uint8_t> ph;

    // One electron moves from orbital o to the orbital with momentum m + shift.
    auto emit = [&](int o, const LatticeVector& shift, double value) {
      const auto target = sector.find_orbital(sector.orbitals()[static_cast<std::size_t>(o)] + shift);
      if (!target) return;
      occ.assign(src_e.begin(), src_e.end());
      int sign = annihilate_orbital(occ, o);
      sign *= create_orbital(occ, *target);
      if (sign == 0) return;
      if (auto i = sector.find(occ, ph)) out.emplace_back(*i, sign * value);
    };
    // Applies b (create=false) or b^+ to ph in place; returns the sqrt(n) factor, 0 if truncated.
    auto ladder = [&](int s, bool create) -> double {
      const int n = ph[static_cast<std::size_t>(s)];
      if (create) {
        if (n + 1 > sector.spec().n_max) return 0.0;
        ph[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(n + 1);
        return std::sqrt(static_cast<double>(n + 1));
      }
      if (n == 0) return 0.0;
      ph[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(n - 1);
      return std::sqrt(static_cast<double>(n));
    };

    for (int o : src_e) {
      const Eigen::Vector3d kvec = k0 * sector.orbitals()[static_cast<std::size_t>(o)].cast<double>();
      // -(e/mc) A.p: a^+_{k+q} a_k b_q  and  a^+_{k-q} a_k b^+_q
      for (int s = 0; s < slots; ++s) {
        const double g = linear * amp[static_cast<std::size_t>(s)] * k.hbar * pol[static_cast<std::size_t>(s)].dot(kvec);
        if (g == 0.0) continue;
        const LatticeVector& qm = sector.slot_momentum(s);
        ph.assign(src_p.begin(), src_p.end());
        if (const double f = ladder(s, false); f != 0.0) emit(o, qm, g * f);
        ph.assign(src_p.begin(), src_p.end());
        if (const double f = ladder(s, true); f != 0.0) emit(o, -qm, g * f);
      }
      // (e^2/2mc^2) A^2, normal ordered:
      //   b_a b_b + 2 b^+_a b_b + b^+_a b^+_b, electron kicked by the net photon momentum.
      for (int a = 0; a < slots; ++a)
        for (int b = 0; b < slots; ++b) {
          const double g = quadratic * amp[static_cast<std::size_t>(a)] * amp[static_cast<std::size_t>(b)] *
                           pol[static_cast<std::size_t>(a)].dot(pol[static_cast<std::size_t>(b)]);
          if (g == 0.0) continue;
          const LatticeVector& qa = sector.slot_momentum(a);
          const LatticeVector& qb = sector.slot_momentum(b);
          ph.assign(src_p.begin(), src_p.end());
          if (double f = ladder(b, false); f != 0.0)
            if (f *= ladder(a, false); f != 0.0) emit(o, qa + qb, g * f);
          ph.assign(src_p.begin(), src_p.end());
          if (double f = ladder(b, false); f != 0.0)
            if (f *= ladder(a, true); f != 0.0) emit(o, qb - qa, 2.0 * g * f);
          ph.assign(src_p.begin(), src_p.end());
          if (double f = ladder(b, true); f != 0.0)
            if (f *= ladder(a, true); f != 0.0) emit(o, -qa - qb, g * f);
        }
    }
  });
}

SparseHamiltonian build_coulomb(const FockSector& sector, const Constants& k, int workers) {
  const int n_e = sector.spec().n_electrons;
  if (n_e > 2) throw std::invalid_argument("Coulomb term supports at most two electrons");
  const double k0 = 2.0 * pi / sector.box_length();
  const double omega_box = std::pow(sector.box_length(), 3);
  const double strength = 4.0 * pi * k.charge * k.charge / omega_box;
  return assemble_columns(sector, k, workers, [&](Eigen::Index j, Column& out) {
    if (n_e < 2 || k.charge == 0.0) return;
    const auto src = sector.electrons(j);
    const auto ph = sector.photons(j);
    std::vector<int> occ;
    for (int p1 = 0; p1 < n_e; ++p1)
      for (int p2 = 0; p2 < n_e; ++p2) {
        if (p1 == p2) continue;
        const int k1 = src[static_cast<std::size_t>(p1)];
        const int k2 = src[static_cast<std::size_t>(p2)];
        const LatticeVector& m1 = sector.orbitals()[static_cast<std::size_t>(k1)];
        const LatticeVector& m2 = sector.orbitals()[static_cast<std::size_t>(k2)];
        for (int t1 = 0; t1 < sector.orbital_count(); ++t1) {
          const LatticeVector kappa = sector.orbitals()[static_cast<std::size_t>(t1)] - m1;
          if (kappa.isZero()) continue;
          const auto t2 = sector.find_orbital(m2 - kappa);
          if (!t2) continue;
          occ.assign(src.begin(), src.end());
          int sign = annihilate_orbital(occ, k1);
          sign *= annihilate_orbital(occ, k2);
          sign *= create_orbital(occ, *t2);
          sign *= create_orbital(occ, t1);
          if (sign == 0) continue;
          const double v = strength / (k0 * k0 * static_cast<double>(kappa.squaredNorm()));
          if (auto i = sector.find(occ, ph)) out.emplace_back(*i, 0.5 * sign * v);
        }
      }
  });
}

SparseHamiltonian assemble_h_qed(const FockSector& sector, const ModeSet& modes, const Constants& k, int workers) {
  return build_photon_energy(sector, modes, k) + build_electron_kinetic(sector, k) +
         build_minimal_coupling(sector, modes, k, workers) + build_coulomb(sector, k, workers);
}

void export_matrix(std::ostream& os, const SparseHamiltonian& h) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(h.sector_hash));
  os << "# nrqed hamiltonian dimension " << h.dimension << " sector_hash " << hash << " nnz " << h.upper.nonZeros()
     << '\n';
  for (Eigen::Index r = 0; r < h.upper.outerSize(); ++r)
    for (decltype(h.upper)::InnerIterator it(h.upper, r); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << format_double(it.value().real()) << ' '
         << format_double(it.value().imag()) << '\n';
}

}  // namespace nrqed
