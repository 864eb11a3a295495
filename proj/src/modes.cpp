#include "nrqed/modes.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

namespace nrqed {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Every lattice vector with |m| k0 <= cutoff, lexicographic in (mx, my, mz).
std::vector<LatticeVector> lattice_ball(double box_length, double cutoff) {
  const double k0 = two_pi / box_length;
  const int reach = static_cast<int>(std::floor(cutoff / k0)) + 1;
  const double limit = cutoff * cutoff * (1.0 + 1e-12);
  std::vector<LatticeVector> out;
  for (int x = -reach; x <= reach; ++x)
    for (int y = -reach; y <= reach; ++y)
      for (int z = -reach; z <= reach; ++z) {
        const LatticeVector m(x, y, z);
        if (static_cast<double>(m.squaredNorm()) * k0 * k0 <= limit) out.push_back(m);
      }
  return out;
}

std::int64_t lattice_key(const LatticeVector& m) {
  constexpr std::int64_t span = 1 << 20;
  return ((static_cast<std::int64_t>(m[0]) + span / 2) * span + (m[1] + span / 2)) * span + (m[2] + span / 2);
}

void append_bits(std::string& s, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

void append_int(std::string& s, std::int64_t v) {
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

// Compositions of slots with each entry <= n_max and sum <= total, in
// colexicographic order: the last slot varies slowest.
void compositions(int slots, int n_max, int total, std::vector<std::uint8_t>& out) {
  std::vector<std::uint8_t> current(static_cast<std::size_t>(slots), 0);
  auto recurse = [&](auto&& self, int slot, int remaining) -> void {
    if (slot < 0) {
      out.insert(out.end(), current.begin(), current.end());
      return;
    }
    for (int n = 0; n <= std::min(n_max, remaining); ++n) {
      current[static_cast<std::size_t>(slot)] = static_cast<std::uint8_t>(n);
      self(self, slot - 1, remaining - n);
    }
    current[static_cast<std::size_t>(slot)] = 0;
  };
  recurse(recurse, slots - 1, total);
}

// Number of such compositions, by dynamic programming over slots.
double composition_count(int slots, int n_max, int total) {
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  for (int s = 0; s < slots; ++s) {
    std::vector<double> next(ways.size(), 0.0);
    for (int used = 0; used <= total; ++used)
      for (int n = 0; n <= n_max && used + n <= total; ++n)
        next[static_cast<std::size_t>(used + n)] += ways[static_cast<std::size_t>(used)];
    ways = std::move(next);
  }
  double sum = 0.0;
  for (double w : ways) sum += w;
  return sum;
}

void combinations(int n, int k, std::vector<int>& out) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  auto recurse = [&](auto&& self, int pos, int start) -> void {
    if (pos == k) {
      out.insert(out.end(), idx.begin(), idx.end());
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[static_cast<std::size_t>(pos)] = i;
      self(self, pos + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);
}

std::string comp_key(std::span<const std::uint8_t> photons) {
  return std::string(reinterpret_cast<const char*>(photons.data()), photons.size());
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool lexicographically_positive(const LatticeVector& m) {
  for (int a = 0; a < 3; ++a)
    if (m[a] != 0) return m[a] > 0;
  return false;
}

std::optional<int> ModeSet::find(const LatticeVector& m) const {
  auto it = std::lower_bound(modes.begin(), modes.end(), m, [](const PhotonMode& p, const LatticeVector& v) {
    return std::lexicographical_compare(p.m.data(), p.m.data() + 3, v.data(), v.data() + 3);
  });
  if (it == modes.end() || it->m != m) return std::nullopt;
  return static_cast<int>(it - modes.begin());
}

int ModeSet::partner(int mode) const {
  const auto p = find(-modes.at(static_cast<std::size_t>(mode)).m);
  if (!p) throw std::logic_error("mode set is not closed under q -> -q");
  return *p;
}

std::uint64_t ModeSet::hash() const {
  std::string s;
  append_bits(s, box_length);
  append_bits(s, q_cutoff);
  for (const auto& p : modes) {
    for (int a = 0; a < 3; ++a) append_int(s, p.m[a]);
    for (const auto& e : p.polarization)
      for (int a = 0; a < 3; ++a) append_bits(s, e[a]);
  }
  return fnv1a(s);
}

ModeSet build_modes(double box_length, double q_cutoff) {
  if (!(box_length > 0.0)) throw std::invalid_argument("box length must be positive");
  const double k0 = two_pi / box_length;
  if (!(q_cutoff >= k0 * (1.0 - 1e-12)))
    throw std::invalid_argument("q_cutoff " + std::to_string(q_cutoff) + " is below the smallest lattice wavevector " +
                                std::to_string(k0));
  ModeSet set;
  set.box_length = box_length;
  set.q_cutoff = q_cutoff;
  for (const LatticeVector& m : lattice_ball(box_length, q_cutoff)) {
    if (m.isZero()) continue;
    PhotonMode p;
    p.m = m;
    p.q = k0 * m.cast<double>();
    set.modes.push_back(p);
  }
  if (set.modes.empty()) throw std::invalid_argument("mode set is empty");
  // Polarizations on the canonical member, copied to its partner.
  for (auto& p : set.modes) {
    if (!lexicographically_positive(p.m)) continue;
    const Eigen::Vector3d q = p.q;
    Eigen::Vector3d e1 = q.cross(Eigen::Vector3d::UnitZ());
    e1 = e1.norm() < 1e-12 * q.norm() ? Eigen::Vector3d::UnitX() : e1.normalized();
    const Eigen::Vector3d e2 = q.cross(e1).normalized();
    p.polarization = {e1, e2};
  }
  for (auto& p : set.modes)
    if (!lexicographically_positive(p.m)) p.polarization = set.modes[static_cast<std::size_t>(*set.find(-p.m))].polarization;
  return set;
}

ModeSet rotate_polarizations(const ModeSet& modes, const std::function<double(const LatticeVector&)>& angle) {
  ModeSet out = modes;
  for (auto& p : out.modes) {
    const double t = angle(lexicographically_positive(p.m) ? LatticeVector(p.m) : LatticeVector(-p.m));
    const auto [e1, e2] = p.polarization;
    p.polarization = {e1 * std::cos(t) + e2 * std::sin(t), -e1 * std::sin(t) + e2 * std::cos(t)};
  }
  return out;
}

std::vector<LatticeVector> plane_wave_orbitals(double box_length, double k_cutoff) {
  if (!(box_length > 0.0)) throw std::invalid_argument("box length must be positive");
  if (!(k_cutoff >= 0.0)) throw std::invalid_argument("k_cutoff must be non-negative");
  return lattice_ball(box_length, k_cutoff);
}

DimensionError::DimensionError(Eigen::Index dimension, Eigen::Index cap)
    : std::runtime_error("sector dimension " + std::to_string(dimension) + " exceeds the cap " + std::to_string(cap)),
      dimension_(dimension) {}

FockSector::FockSector(const ModeSet& modes, const SectorSpec& spec)
    : spec_(spec), box_length_(modes.box_length), mode_hash_(modes.hash()), slots_(modes.slot_count()) {
  if (spec.n_max < 0 || spec.n_ph_max < 0) throw std::invalid_argument("photon cutoffs must be non-negative");
  if (spec.n_max > 255) throw std::invalid_argument("n_max above 255 is not supported");
  if (spec.n_electrons < 0 || spec.n_electrons > 2)
    throw std::invalid_argument("electron number must be 0, 1 or 2, got " + std::to_string(spec.n_electrons));

  orbitals_ = plane_wave_orbitals(box_length_, spec.k_cutoff);
  for (int i = 0; i < orbital_count(); ++i) orbital_index_.emplace(lattice_key(orbitals_[static_cast<std::size_t>(i)]), i);
  for (int s = 0; s < slots_; ++s) slot_m_.push_back(modes.modes[static_cast<std::size_t>(s / 2)].m);
  if (orbital_count() < spec.n_electrons) throw std::invalid_argument("fewer orbitals than electrons");

  combinations(orbital_count(), spec.n_electrons, configs_);
  const int n_configs = spec.n_electrons == 0 ? 1 : static_cast<int>(configs_.size()) / spec.n_electrons;
  const int n_e = spec.n_electrons;

  const double n_comps_estimate = composition_count(slots_, spec.n_max, spec.n_ph_max);
  if (n_comps_estimate * slots_ > 4e9)
    throw DimensionError(static_cast<Eigen::Index>(std::min(n_comps_estimate, 9e18)), spec.max_dimension);
  if (!spec.total_momentum && n_comps_estimate * n_configs > static_cast<double>(spec.max_dimension))
    throw DimensionError(static_cast<Eigen::Index>(std::min(n_comps_estimate * n_configs, 9e18)), spec.max_dimension);
  compositions(slots_, spec.n_max, spec.n_ph_max, comps_);
  const int n_comps = slots_ == 0 ? 1 : static_cast<int>(comps_.size()) / slots_;

  std::vector<LatticeVector> comp_m(static_cast<std::size_t>(n_comps), LatticeVector::Zero());
  for (int c = 0; c < n_comps; ++c) {
    for (int s = 0; s < slots_; ++s)
      comp_m[static_cast<std::size_t>(c)] += comps_[static_cast<std::size_t>(c) * slots_ + s] * slot_m_[static_cast<std::size_t>(s)];
    comp_index_.emplace(comp_key({comps_.data() + static_cast<std::size_t>(c) * slots_, static_cast<std::size_t>(slots_)}), c);
  }
  std::vector<LatticeVector> config_m(static_cast<std::size_t>(n_configs), LatticeVector::Zero());
  for (int e = 0; e < n_configs; ++e) {
    std::span<const int> occ(configs_.data() + static_cast<std::size_t>(e) * n_e, static_cast<std::size_t>(n_e));
    for (int o : occ) config_m[static_cast<std::size_t>(e)] += orbitals_[static_cast<std::size_t>(o)];
    config_index_.emplace(config_key(occ), e);
  }

  if (spec.total_momentum) {
    std::map<std::tuple<int, int, int>, Eigen::Index> per_momentum;
    for (const auto& m : comp_m) ++per_momentum[{m[0], m[1], m[2]}];
    Eigen::Index dim = 0;
    for (const auto& m : config_m) {
      const LatticeVector need = *spec.total_momentum - m;
      if (auto it = per_momentum.find({need[0], need[1], need[2]}); it != per_momentum.end()) dim += it->second;
    }
    if (dim > spec.max_dimension) throw DimensionError(dim, spec.max_dimension);
  }

  for (int e = 0; e < n_configs; ++e)
    for (int c = 0; c < n_comps; ++c) {
      if (spec.total_momentum &&
          config_m[static_cast<std::size_t>(e)] + comp_m[static_cast<std::size_t>(c)] != *spec.total_momentum)
        continue;
      state_index_.emplace(static_cast<std::int64_t>(e) * n_comps + c, static_cast<Eigen::Index>(states_.size()));
      states_.emplace_back(e, c);
    }
}

std::int64_t FockSector::config_key(std::span<const int> electrons) const {
  std::int64_t key = 0;
  for (int o : electrons) key = key * (orbital_count() + 1) + o + 1;
  return key;
}

std::optional<int> FockSector::find_orbital(const LatticeVector& m) const {
  if (auto it = orbital_index_.find(lattice_key(m)); it != orbital_index_.end()) return it->second;
  return std::nullopt;
}

std::span<const int> FockSector::electrons(Eigen::Index i) const {
  const auto n = static_cast<std::size_t>(spec_.n_electrons);
  return {configs_.data() + static_cast<std::size_t>(states_[static_cast<std::size_t>(i)].first) * n, n};
}

std::span<const std::uint8_t> FockSector::photons(Eigen::Index i) const {
  const auto n = static_cast<std::size_t>(slots_);
  return {comps_.data() + static_cast<std::size_t>(states_[static_cast<std::size_t>(i)].second) * n, n};
}

LatticeVector FockSector::momentum(Eigen::Index i) const {
  LatticeVector m = LatticeVector::Zero();
  for (int o : electrons(i)) m += orbitals_[static_cast<std::size_t>(o)];
  const auto ph = photons(i);
  for (int s = 0; s < slots_; ++s) m += ph[static_cast<std::size_t>(s)] * slot_m_[static_cast<std::size_t>(s)];
  return m;
}

std::optional<Eigen::Index> FockSector::find(std::span<const int> electrons, std::span<const std::uint8_t> photons) const {
  if (static_cast<int>(electrons.size()) != spec_.n_electrons || static_cast<int>(photons.size()) != slots_)
    return std::nullopt;
  const auto e = config_index_.find(config_key(electrons));
  if (e == config_index_.end()) return std::nullopt;
  const auto c = comp_index_.find(comp_key(photons));
  if (c == comp_index_.end()) return std::nullopt;
  const auto n_comps = static_cast<std::int64_t>(comp_index_.size());
  const auto s = state_index_.find(static_cast<std::int64_t>(e->second) * n_comps + c->second);
  if (s == state_index_.end()) return std::nullopt;
  return s->second;
}

std::uint64_t FockSector::hash() const {
  std::string s;
  append_int(s, spec_.n_max);
  append_int(s, spec_.n_ph_max);
  append_bits(s, spec_.k_cutoff);
  append_int(s, spec_.n_electrons);
  append_int(s, spec_.total_momentum ? 1 : 0);
  if (spec_.total_momentum)
    for (int a = 0; a < 3; ++a) append_int(s, (*spec_.total_momentum)[a]);
  append_int(s, static_cast<std::int64_t>(mode_hash_));
  append_int(s, dimension());
  return fnv1a(s);
}

FockSector enumerate_sector(const ModeSet& modes, int n_max, int n_ph_max, double k_cutoff, int n_electrons,
                            std::optional<LatticeVector> total_momentum, Eigen::Index max_dimension) {
  SectorSpec spec;
  spec.n_max = n_max;
  spec.n_ph_max = n_ph_max;
  spec.k_cutoff = k_cutoff;
  spec.n_electrons = n_electrons;
  spec.total_momentum = total_momentum;
  spec.max_dimension = max_dimension;
  return FockSector(modes, spec);
}

int annihilate_orbital(std::vector<int>& occupied, int orbital) {
  auto it = std::lower_bound(occupied.begin(), occupied.end(), orbital);
  if (it == occupied.end() || *it != orbital) return 0;
  const auto pos = it - occupied.begin();
  occupied.erase(it);
  return pos % 2 == 0 ? 1 : -1;
}

int create_orbital(std::vector<int>& occupied, int orbital) {
  auto it = std::lower_bound(occupied.begin(), occupied.end(), orbital);
  if (it != occupied.end() && *it == orbital) return 0;
  const auto pos = it - occupied.begin();
  occupied.insert(it, orbital);
  return pos % 2 == 0 ? 1 : -1;
}

Eigen::SparseMatrix<double> photon_ladder_matrix(const FockSector& sector, int slot, Ladder kind) {
  if (slot < 0 || slot >= sector.slot_count()) throw std::invalid_argument("photon slot out of range");
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<std::uint8_t> ph;
  for (Eigen::Index j = 0; j < sector.dimension(); ++j) {
    const auto src = sector.photons(j);
    ph.assign(src.begin(), src.end());
    const int n = ph[static_cast<std::size_t>(slot)];
    double amp = 0.0;
    if (kind == Ladder::annihilate) {
      if (n == 0) continue;
      amp = std::sqrt(static_cast<double>(n));
      ph[static_cast<std::size_t>(slot)] = static_cast<std::uint8_t>(n - 1);
    } else {
      if (n + 1 > sector.spec().n_max) continue;
      amp = std::sqrt(static_cast<double>(n + 1));
      ph[static_cast<std::size_t>(slot)] = static_cast<std::uint8_t>(n + 1);
    }
    if (auto i = sector.find(sector.electrons(j), ph)) entries.emplace_back(*i, j, amp);
  }
  Eigen::SparseMatrix<double> m(sector.dimension(), sector.dimension());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Eigen::VectorXcd apply_ladder(const FockSector& sector, const Eigen::VectorXcd& v, int mode, int lambda, Ladder kind) {
  if (mode < 0 || 2 * mode >= sector.slot_count()) throw std::invalid_argument("unknown photon mode " + std::to_string(mode));
  if (lambda < 0 || lambda > 1) throw std::invalid_argument("polarization index must be 0 or 1");
  if (sector.spec().total_momentum)
    throw std::invalid_argument("ladder operators change the total momentum; use an unrestricted sector");
  if (v.size() != sector.dimension()) throw std::invalid_argument("vector does not match the sector dimension");
  return photon_ladder_matrix(sector, 2 * mode + lambda, kind).cast<std::complex<double>>() * v;
}

Eigen::SparseMatrix<double> electron_ladder_matrix(const FockSector& from, const FockSector& to, int orbital,
                                                   Ladder kind) {
  if (from.mode_hash() != to.mode_hash() || from.orbitals() != to.orbitals())
    throw std::invalid_argument("sectors are built on different mode sets or orbitals");
  const int shift = kind == Ladder::create ? 1 : -1;
  if (to.spec().n_electrons != from.spec().n_electrons + shift)
    throw std::invalid_argument("target sector has the wrong electron number");
  if (orbital < 0 || orbital >= from.orbital_count()) throw std::invalid_argument("orbital out of range");
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<int> occ;
  for (Eigen::Index j = 0; j < from.dimension(); ++j) {
    const auto src = from.electrons(j);
    occ.assign(src.begin(), src.end());
    const int sign = kind == Ladder::create ? create_orbital(occ, orbital) : annihilate_orbital(occ, orbital);
    if (sign == 0) continue;
    if (auto i = to.find(occ, from.photons(j))) entries.emplace_back(*i, j, static_cast<double>(sign));
  }
  Eigen::SparseMatrix<double> m(to.dimension(), from.dimension());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

}  // namespace nrqed
