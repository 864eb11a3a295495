#include "doctest.h"

#include "nrqed/eigensolver.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace nrqed;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

SparseHamiltonian from_dense(const Eigen::MatrixXcd& m) {
  SparseHamiltonian h;
  h.dimension = m.rows();
  Eigen::MatrixXcd upper = m.triangularView<Eigen::Upper>();
  h.upper = upper.sparseView();
  h.upper.makeCompressed();
  return h;
}

// Random Hermitian matrix with a given fill fraction.
Eigen::MatrixXcd random_hermitian(Eigen::Index n, double fill, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 1.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = 3.0 * u(rng);
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (p(rng) < fill) {
        m(i, j) = {u(rng), u(rng)};
        m(j, i) = std::conj(m(i, j));
      }
  }
  return m;
}

SparseHamiltonian qed_block(double e, int n_max = 2, int n_ph = 2) {
  const ModeSet modes = build_modes(two_pi, 1.0);
  const FockSector s = enumerate_sector(modes, n_max, n_ph, 1.0, 1, LatticeVector(1, 0, 0));
  return assemble_h_qed(s, modes, Constants{}.with_charge(e));
}

}  // namespace

TEST_CASE("Lanczos on a diagonal matrix") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const Eigen::Index n = 300;
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = u(rng);
  const auto r = lanczos(from_dense(d.cast<std::complex<double>>().asDiagonal().toDenseMatrix()), 4, 1e-12, 400, 1);
  std::sort(d.begin(), d.end());
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r.eigenvalues[i] - d[i]) <= 1e-13);
}

TEST_CASE("Lanczos matches dense diagonalization") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    CAPTURE(seed);
    const Eigen::Index n = 150 + 50 * static_cast<Eigen::Index>(seed);
    const SparseHamiltonian h = from_dense(random_hermitian(n, 0.05, seed));
    const Eigen::VectorXd dense = dense_eigenvalues(h);
    const auto r = lanczos(h, 5, 1e-12, 1000, 7, true);
    CHECK((r.eigenvalues - dense.head(5)).cwiseAbs().maxCoeff() <= 1e-10);
    const double scale = h.one_norm();
    for (double res : r.residuals) CHECK(res <= 1e-12 * scale * 10);
    // eigenvectors are orthonormal
    const Eigen::MatrixXcd gram = r.eigenvectors.adjoint() * r.eigenvectors;
    CHECK((gram - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("degenerate levels are all found") {
  // two copies of the same block: every level is doubly degenerate
  const Eigen::MatrixXcd block = random_hermitian(60, 0.2, 9);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(120, 120);
  m.topLeftCorner(60, 60) = block;
  m.bottomRightCorner(60, 60) = block;
  const SparseHamiltonian h = from_dense(m);
  const Eigen::VectorXd dense = dense_eigenvalues(h);
  const auto r = lanczos(h, 4, 1e-12, 500, 3);
  CHECK((r.eigenvalues - dense.head(4)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(std::abs(r.eigenvalues[0] - r.eigenvalues[1]) <= 1e-10);
}

TEST_CASE("Lanczos is deterministic") {
  const SparseHamiltonian h = qed_block(-1.0);
  const auto a = lanczos(h, 3, 1e-12, 500, 42);
  const auto b = lanczos(h, 3, 1e-12, 500, 42);
  const auto c = lanczos(h, 3, 1e-12, 500, 42, false, 4);
  for (int i = 0; i < 3; ++i) {
    CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
    CHECK(a.eigenvalues[i] == c.eigenvalues[i]);
  }
  CHECK(a.ritz_history == b.ritz_history);
  CHECK(a.ritz_history == c.ritz_history);
}

TEST_CASE("Ritz values decrease monotonically") {
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const SparseHamiltonian h = from_dense(random_hermitian(80, 0.3, seed));
    const auto r = lanczos(h, 1, 1e-13, 200, seed);
    const double exact = dense_eigenvalues(h)[0];
    REQUIRE(r.ritz_history.size() > 3);
    for (std::size_t i = 1; i < r.ritz_history.size(); ++i) CHECK(r.ritz_history[i] <= r.ritz_history[i - 1] + 1e-12);
    for (double v : r.ritz_history) CHECK(v >= exact - 1e-10);
  }
}

TEST_CASE("Lanczos on a Hamiltonian block") {
  const SparseHamiltonian h = qed_block(-2.0);
  REQUIRE(h.dimension <= 2000);
  const Eigen::VectorXd dense = dense_eigenvalues(h);
  const auto r = lanczos(h, 4, 1e-12, 1000, 1);
  CHECK((r.eigenvalues - dense.head(4)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("Lanczos errors") {
  const SparseHamiltonian h = from_dense(random_hermitian(200, 0.1, 1));
  CHECK_THROWS_AS(lanczos(h, 0, 1e-10, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(lanczos(h, 201, 1e-10, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(lanczos(h, 1, 0.0, 10, 1), std::invalid_argument);
  try {
    lanczos(h, 1, 1e-14, 3, 1);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    REQUIRE(e.best_residuals().size() == 1);
    CHECK(e.best_residuals()[0] > 0.0);
    CHECK(std::isfinite(e.best_residuals()[0]));
  }
}

TEST_CASE("matrix-vector product over both triangles") {
  const Eigen::MatrixXcd m = random_hermitian(50, 0.3, 4);
  const SparseHamiltonian h = from_dense(m);
  const Eigen::VectorXcd x = Eigen::VectorXcd::Random(50);
  CHECK((nrqed::apply(h, x) - m * x).norm() <= 1e-13 * (m * x).norm());
  CHECK_THROWS_AS(nrqed::apply(h, Eigen::VectorXcd::Ones(3)), std::invalid_argument);
}

TEST_CASE("second-order shift") {
  SUBCASE("no perturbation") {
    const Eigen::VectorXd e0 = Eigen::VectorXd::LinSpaced(5, 0.0, 4.0);
    const SparseHamiltonian v = from_dense(Eigen::MatrixXcd::Zero(5, 5));
    CHECK(second_order_shift(e0, v, 0) == 0.0);
  }
  SUBCASE("two-level closed form") {
    const double delta = 1.3;
    for (double v : {1e-1, 5e-2, 2.5e-2}) {
      Eigen::MatrixXcd m(2, 2);
      m << 0.0, v, v, 0.0;
      const double shift = second_order_shift(Eigen::Vector2d(0.0, delta), from_dense(m), 0);
      CHECK(shift == doctest::Approx(-v * v / delta).epsilon(1e-15));
      // exact lower eigenvalue of [[0, v], [v, delta]]
      const double exact = delta / 2 - std::sqrt(delta * delta / 4 + v * v);
      const double remainder = exact - shift;
      CHECK(std::abs(remainder - v * v * v * v / (delta * delta * delta)) <= 3 * std::pow(v, 6) / std::pow(delta, 5));
    }
  }
  SUBCASE("degenerate coupling is rejected") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 1) = m(1, 0) = 0.1;
    CHECK_THROWS_AS(second_order_shift(Eigen::Vector3d(1.0, 1.0, 2.0), from_dense(m), 0), NumericalError);
    // an uncoupled degenerate level is harmless
    m(0, 1) = m(1, 0) = 0.0;
    m(0, 2) = m(2, 0) = 0.1;
    CHECK(second_order_shift(Eigen::Vector3d(1.0, 1.0, 2.0), from_dense(m), 0) == doctest::Approx(-0.01));
  }
}

TEST_CASE("diagonal extraction") {
  const Eigen::MatrixXcd m = random_hermitian(20, 0.5, 8);
  const Eigen::VectorXd d = diagonal_of(from_dense(m));
  CHECK((d - m.diagonal().real()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("threaded product equals the serial one bitwise") {
  const Eigen::Index n = 30000;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Eigen::Triplet<std::complex<double>>> t;
  for (Eigen::Index i = 0; i < n; ++i) {
    t.emplace_back(i, i, u(rng));
    for (int k = 0; k < 4; ++k) {
      const Eigen::Index j = i + 1 + static_cast<Eigen::Index>(rng() % 500);
      if (j < n) t.emplace_back(i, j, std::complex<double>(u(rng), u(rng)));
    }
  }
  SparseHamiltonian h;
  h.dimension = n;
  h.upper.resize(n, n);
  h.upper.setFromTriplets(t.begin(), t.end());
  const Eigen::VectorXcd x = Eigen::VectorXcd::Random(n);
  const Eigen::VectorXcd serial = nrqed::apply(h, x, 1);
  for (int w : {2, 3, 8}) CHECK(nrqed::apply(h, x, w) == serial);
}
