#include "nrqed/eigensolver.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <thread>

namespace nrqed {

namespace {

using Csr = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;

Eigen::VectorXcd apply_full(const Csr& a, const Eigen::VectorXcd& x, int workers) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXcd y(n);
  auto rows = [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index r = begin; r < end; ++r) {
      std::complex<double> s = 0.0;
      for (Csr::InnerIterator it(a, r); it; ++it) s += it.value() * x[it.col()];
      y[r] = s;
    }
  };
  const int w = n < 20000 ? 1 : std::max(1, workers);
  if (w == 1) {
    rows(0, n);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < w; ++t) pool.emplace_back(rows, n * t / w, n * (t + 1) / w);
    for (auto& th : pool) th.join();
  }
  return y;
}

// All ones plus a deterministic perturbation drawn with splitmix64.
Eigen::VectorXcd start_vector(Eigen::Index n, std::uint64_t seed) {
  std::uint64_t state = seed;
  auto next = [&]() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    v[i] = 1.0 + 0.5 * (2.0 * u - 1.0);
  }
  return v;
}

// Two passes of classical Gram-Schmidt against every column of `basis`.
void orthogonalize(Eigen::VectorXcd& w, const std::vector<Eigen::VectorXcd>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) w -= b.dot(w) * b;
}

}  // namespace

Eigen::VectorXcd apply(const SparseHamiltonian& h, const Eigen::VectorXcd& x, int workers) {
  if (x.size() != h.dimension) throw std::invalid_argument("vector does not match the Hamiltonian dimension");
  return apply_full(h.full(), x, workers);
}

LanczosResult lanczos(const SparseHamiltonian& h, int n_eigs, double tol, int max_iter, std::uint64_t seed,
                      bool want_vectors, int workers) {
  const Eigen::Index n = h.dimension;
  if (n_eigs < 1) throw std::invalid_argument("n_eigs must be at least 1");
  if (n < n_eigs) throw std::invalid_argument("dimension " + std::to_string(n) + " is below n_eigs");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

  const Csr a = h.full();
  const double scale = std::max(h.one_norm(), 1e-300);
  LanczosResult result;
  std::vector<Eigen::VectorXcd> locked;
  std::vector<double> values;

  for (int run = 0; run < n_eigs; ++run) {
    Eigen::VectorXcd v = start_vector(n, seed + static_cast<std::uint64_t>(run));
    orthogonalize(v, locked);
    if (v.norm() == 0.0) throw NumericalError("start vector lies in the locked subspace");
    v /= v.norm();

    std::vector<Eigen::VectorXcd> basis{v};
    std::vector<double> alpha, beta;
    const Eigen::Index room = n - static_cast<Eigen::Index>(locked.size());
    double best = std::numeric_limits<double>::infinity();
    bool converged = false;
    double theta = 0.0;
    Eigen::VectorXd ritz;

    for (int j = 0; j < max_iter; ++j) {
      Eigen::VectorXcd w = apply_full(a, basis.back(), workers);
      ++result.iterations;
      const double aj = basis.back().dot(w).real();
      alpha.push_back(aj);
      w -= aj * basis.back();
      if (j > 0) w -= beta.back() * basis[basis.size() - 2];
      orthogonalize(w, locked);
      orthogonalize(w, basis);
      const double bj = w.norm();
      const auto m = static_cast<Eigen::Index>(alpha.size());

      Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd e = Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1);
      const bool exhausted = bj <= 1e-14 * scale || m >= room;
      const bool check = exhausted || m <= 60 || m % 10 == 0 || j + 1 == max_iter;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(d, e, check ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
      theta = tri.eigenvalues()[0];
      if (run == 0) result.ritz_history.push_back(theta);
      if (check) {
        const double estimate = bj * std::abs(tri.eigenvectors()(m - 1, 0));
        best = std::min(best, estimate);
        if (estimate <= tol * scale || exhausted) {
          ritz = tri.eigenvectors().col(0);
          converged = true;
          break;
        }
      }
      beta.push_back(bj);
      basis.push_back(w / bj);
    }
    if (!converged)
      throw ConvergenceError("Lanczos did not converge for eigenvalue " + std::to_string(run) + " within " +
                                 std::to_string(max_iter) + " iterations",
                             std::vector<double>{best});

    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < ritz.size(); ++i) x += ritz[i] * basis[static_cast<std::size_t>(i)];
    orthogonalize(x, locked);
    x /= x.norm();
    const double lambda = x.dot(apply_full(a, x, workers)).real();
    const double residual = (apply_full(a, x, workers) - lambda * x).norm();
    if (residual > 10.0 * tol * scale)
      throw ConvergenceError("Lanczos eigenpair " + std::to_string(run) + " lost accuracy", std::vector<double>{residual});
    locked.push_back(x);
    values.push_back(lambda);
    result.residuals.push_back(residual);
  }

  std::vector<int> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return values[static_cast<std::size_t>(l)] < values[static_cast<std::size_t>(r)]; });
  result.eigenvalues.resize(n_eigs);
  std::vector<double> res(result.residuals.size());
  if (want_vectors) result.eigenvectors.resize(n, n_eigs);
  for (int i = 0; i < n_eigs; ++i) {
    const auto o = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
    result.eigenvalues[i] = values[o];
    res[static_cast<std::size_t>(i)] = result.residuals[o];
    if (want_vectors) result.eigenvectors.col(i) = locked[o];
  }
  result.residuals = std::move(res);
  return result;
}

Eigen::VectorXd dense_eigenvalues(const SparseHamiltonian& h) {
  const Eigen::MatrixXcd dense = Eigen::MatrixXcd(h.full());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  return solver.eigenvalues();
}

Eigen::VectorXd diagonal_of(const SparseHamiltonian& h) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(h.dimension);
  for (Eigen::Index i = 0; i < h.dimension; ++i) d[i] = h.upper.coeff(i, i).real();
  return d;
}

double second_order_shift(const Eigen::VectorXd& h0_diag, const SparseHamiltonian& v, Eigen::Index s) {
  if (h0_diag.size() != v.dimension) throw std::invalid_argument("H0 diagonal does not match V");
  if (s < 0 || s >= v.dimension) throw std::invalid_argument("reference state out of range");
  const Csr full = v.full();
  double shift = 0.0;
  for (Csr::InnerIterator it(full, s); it; ++it) {
    const Eigen::Index m = it.col();
    if (m == s || it.value() == 0.0) continue;
    const double gap = h0_diag[s] - h0_diag[m];
    if (std::abs(gap) < 1e-12)
      throw NumericalError("reference state " + std::to_string(s) + " is degenerate with coupled state " +
                           std::to_string(m));
    shift += std::norm(it.value()) / gap;
  }
  return shift;
}

}  // namespace nrqed
