#include "nrqed/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace nrqed {

namespace {

// In-place plans keyed by shape, created on SIMD-aligned buffers. FFTW's
// planner is not thread safe, execution is.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(const Grid3& grid) {
    const auto key = std::make_tuple(grid.nx(), grid.ny(), grid.nz());
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_complex* data = fftw_alloc_complex(static_cast<std::size_t>(grid.size()));
    // FFTW takes the slowest dimension first.
    PlanPair p;
    p.forward = fftw_plan_dft_3d(grid.nz(), grid.ny(), grid.nx(), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_3d(grid.nz(), grid.ny(), grid.nx(), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(data);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// Aligned scratch buffer reused by the calling thread.
class Scratch {
 public:
  ~Scratch() { fftw_free(data_); }
  fftw_complex* get(std::size_t n) {
    if (n != size_) {
      fftw_free(data_);
      data_ = fftw_alloc_complex(n);
      size_ = n;
    }
    return data_;
  }

 private:
  fftw_complex* data_ = nullptr;
  std::size_t size_ = 0;
};

void execute(fftw_plan plan, Eigen::VectorXcd& v) {
  auto* data = reinterpret_cast<fftw_complex*>(v.data());
  if (fftw_alignment_of(reinterpret_cast<double*>(data)) == 0) {
    fftw_execute_dft(plan, data, data);
    return;
  }
  thread_local Scratch scratch;
  const auto n = static_cast<std::size_t>(v.size());
  fftw_complex* buf = scratch.get(n);
  std::memcpy(buf, static_cast<const void*>(v.data()), n * sizeof(fftw_complex));
  fftw_execute_dft(plan, buf, buf);
  std::memcpy(static_cast<void*>(v.data()), buf, n * sizeof(fftw_complex));
}

template <typename S>
FieldVector<S> narrow(Eigen::VectorXcd v) {
  if constexpr (std::is_same_v<S, double>) {
    return v.real();
  } else {
    return v;
  }
}

}  // namespace

Eigen::VectorXcd forward_fft(const Grid3& grid, Eigen::VectorXcd samples) {
  if (samples.size() != grid.size()) throw GridMismatch("sample count does not match grid " + grid.describe());
  execute(plan_cache().get(grid).forward, samples);
  return samples;
}

Eigen::VectorXcd inverse_fft(const Grid3& grid, Eigen::VectorXcd coefficients) {
  if (coefficients.size() != grid.size()) throw GridMismatch("coefficient count does not match grid " + grid.describe());
  execute(plan_cache().get(grid).backward, coefficients);
  coefficients *= 1.0 / static_cast<double>(grid.size());
  return coefficients;
}

template <typename S>
ScalarField<S> from_fourier(const Grid3& grid, Eigen::VectorXcd coefficients) {
  return ScalarField<S>(grid, narrow<S>(inverse_fft(grid, std::move(coefficients))));
}

template <typename S>
VectorField<S> gradient(const ScalarField<S>& f) {
  const Eigen::VectorXcd fk = to_fourier(f);
  std::array<Eigen::VectorXcd, 3> gk;
  for (auto& g : gk) g.resize(fk.size());
  for_each_wavevector(f.grid, [&](Eigen::Index i, const Eigen::Vector3d& k) {
    for (int a = 0; a < 3; ++a) gk[static_cast<std::size_t>(a)][i] = complex(0.0, k[a]) * fk[i];
  });
  return VectorField<S>(f.grid, {from_fourier<S>(f.grid, std::move(gk[0])).values, from_fourier<S>(f.grid, std::move(gk[1])).values,
                                from_fourier<S>(f.grid, std::move(gk[2])).values});
}

template <typename S>
ScalarField<S> divergence(const VectorField<S>& v) {
  std::array<Eigen::VectorXcd, 3> vk;
  for (int a = 0; a < 3; ++a) vk[static_cast<std::size_t>(a)] = forward_fft(v.grid, v[a].template cast<complex>());
  Eigen::VectorXcd dk(v.grid.size());
  for_each_wavevector(v.grid, [&](Eigen::Index i, const Eigen::Vector3d& k) {
    dk[i] = complex(0.0, k[0]) * vk[0][i] + complex(0.0, k[1]) * vk[1][i] + complex(0.0, k[2]) * vk[2][i];
  });
  return from_fourier<S>(v.grid, std::move(dk));
}

template <typename S>
VectorField<S> curl(const VectorField<S>& v) {
  std::array<Eigen::VectorXcd, 3> vk;
  for (int a = 0; a < 3; ++a) vk[static_cast<std::size_t>(a)] = forward_fft(v.grid, v[a].template cast<complex>());
  std::array<Eigen::VectorXcd, 3> ck;
  for (auto& c : ck) c.resize(v.grid.size());
  const complex I(0.0, 1.0);
  for_each_wavevector(v.grid, [&](Eigen::Index i, const Eigen::Vector3d& k) {
    ck[0][i] = I * (k[1] * vk[2][i] - k[2] * vk[1][i]);
    ck[1][i] = I * (k[2] * vk[0][i] - k[0] * vk[2][i]);
    ck[2][i] = I * (k[0] * vk[1][i] - k[1] * vk[0][i]);
  });
  return VectorField<S>(v.grid, {from_fourier<S>(v.grid, std::move(ck[0])).values, from_fourier<S>(v.grid, std::move(ck[1])).values,
                                from_fourier<S>(v.grid, std::move(ck[2])).values});
}

template <typename S>
ScalarField<S> laplacian(const ScalarField<S>& f) {
  Eigen::VectorXcd fk = to_fourier(f);
  for_each_wavevector(f.grid, [&](Eigen::Index i, const Eigen::Vector3d& k) { fk[i] *= -k.squaredNorm(); });
  return from_fourier<S>(f.grid, std::move(fk));
}

template <typename S>
VectorField<S> transverse_project(const VectorField<S>& v, ZeroMode zero_mode) {
  std::array<Eigen::VectorXcd, 3> vk;
  for (int a = 0; a < 3; ++a) vk[static_cast<std::size_t>(a)] = forward_fft(v.grid, v[a].template cast<complex>());
  for_each_wavevector(v.grid, [&](Eigen::Index i, const Eigen::Vector3d& k) {
    const double k2 = k.squaredNorm();
    if (k2 == 0.0) {
      if (zero_mode == ZeroMode::discard)
        for (auto& c : vk) c[i] = 0.0;
      return;
    }
    const complex kv = (k[0] * vk[0][i] + k[1] * vk[1][i] + k[2] * vk[2][i]) / k2;
    for (int a = 0; a < 3; ++a) vk[static_cast<std::size_t>(a)][i] -= k[a] * kv;
  });
  return VectorField<S>(v.grid, {from_fourier<S>(v.grid, std::move(vk[0])).values, from_fourier<S>(v.grid, std::move(vk[1])).values,
                                from_fourier<S>(v.grid, std::move(vk[2])).values});
}

RealScalarField strip_nyquist(const RealScalarField& f) {
  const Grid3& g = f.grid;
  Eigen::VectorXcd fk = to_fourier(f);
  Eigen::Index idx = 0;
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix, ++idx)
        if (2 * ix == g.nx() || 2 * iy == g.ny() || 2 * iz == g.nz()) fk[idx] = 0.0;
  return from_fourier<double>(g, std::move(fk));
}

RealScalarField solve_coulomb(const RealScalarField& rho) {
  Eigen::VectorXcd rk = to_fourier(strip_nyquist(rho));
  const double four_pi = 4.0 * std::numbers::pi;
  for_each_wavevector(rho.grid, [&](Eigen::Index i, const Eigen::Vector3d& k) {
    const double k2 = k.squaredNorm();
    rk[i] = k2 == 0.0 ? complex(0.0) : rk[i] * (four_pi / k2);
  });
  return from_fourier<double>(rho.grid, std::move(rk));
}

namespace {

Eigen::VectorXcd truncate_two_thirds(const Grid3& grid, Eigen::VectorXcd fk) {
  Eigen::Index idx = 0;
  for (int iz = 0; iz < grid.nz(); ++iz)
    for (int iy = 0; iy < grid.ny(); ++iy)
      for (int ix = 0; ix < grid.nx(); ++ix, ++idx) {
        const bool keep = 3 * std::abs(Grid3::mode_number(ix, grid.nx())) <= grid.nx() &&
                          3 * std::abs(Grid3::mode_number(iy, grid.ny())) <= grid.ny() &&
                          3 * std::abs(Grid3::mode_number(iz, grid.nz())) <= grid.nz();
        if (!keep) fk[idx] = 0.0;
      }
  return fk;
}

}  // namespace

template <typename S>
ScalarField<S> dealias_two_thirds(const ScalarField<S>& f) {
  return from_fourier<S>(f.grid, truncate_two_thirds(f.grid, to_fourier(f)));
}

template <typename S>
VectorField<S> dealias_two_thirds(const VectorField<S>& v) {
  VectorField<S> out(v.grid);
  for (int a = 0; a < 3; ++a)
    out[a] = from_fourier<S>(v.grid, truncate_two_thirds(v.grid, forward_fft(v.grid, v[a].template cast<complex>()))).values;
  return out;
}

double relative_divergence(const RealVectorField& v) {
  std::array<Eigen::VectorXcd, 3> vk;
  for (int a = 0; a < 3; ++a) vk[static_cast<std::size_t>(a)] = forward_fft(v.grid, v[a].cast<complex>());
  double div2 = 0.0;
  double scale2 = 0.0;
  for_each_wavevector(v.grid, [&](Eigen::Index i, const Eigen::Vector3d& k) {
    div2 += std::norm(k[0] * vk[0][i] + k[1] * vk[1][i] + k[2] * vk[2][i]);
    scale2 += k.squaredNorm() * (std::norm(vk[0][i]) + std::norm(vk[1][i]) + std::norm(vk[2][i]));
  });
  return scale2 == 0.0 ? 0.0 : std::sqrt(div2 / scale2);
}

#define NRQED_INSTANTIATE_SPECTRAL(S)                                                       \
  template ScalarField<S> from_fourier<S>(const Grid3&, Eigen::VectorXcd);                  \
  template VectorField<S> gradient<S>(const ScalarField<S>&);                               \
  template ScalarField<S> divergence<S>(const VectorField<S>&);                             \
  template VectorField<S> curl<S>(const VectorField<S>&);                                   \
  template ScalarField<S> laplacian<S>(const ScalarField<S>&);                              \
  template VectorField<S> transverse_project<S>(const VectorField<S>&, ZeroMode);           \
  template ScalarField<S> dealias_two_thirds<S>(const ScalarField<S>&);                     \
  template VectorField<S> dealias_two_thirds<S>(const VectorField<S>&);

NRQED_INSTANTIATE_SPECTRAL(double)
NRQED_INSTANTIATE_SPECTRAL(complex)

#undef NRQED_INSTANTIATE_SPECTRAL

}  // namespace nrqed
