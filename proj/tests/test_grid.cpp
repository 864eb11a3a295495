#include "doctest.h"

#include "nrqed/snapshot.hpp"
#include "nrqed/spectral.hpp"
#include "test_support.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace nrqed;
using namespace nrqed::testing;

namespace {
constexpr double pi = std::numbers::pi;
const Grid3 grid16(16, 2.0 * pi);
const Grid3 grid_box(16, 12, 8, 7.5);
}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid3(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid3(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid3(8, 8, 9, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid3(8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid3(8, -1.0), std::invalid_argument);
  const Grid3 g(8, 2.0);
  CHECK(g.size() == 512);
  CHECK(g.volume() == doctest::Approx(8.0));
  CHECK(g.index(1, 2, 3) == 1 + 8 * (2 + 8 * 3));
  // Wavevector set closed under negation: every non-Nyquist index has a partner.
  for (int i = 0; i < 8; ++i) {
    const int partner = (8 - i) % 8;
    CHECK(g.spectral_wavenumber(0, i) == -g.spectral_wavenumber(0, partner));
  }
}

TEST_CASE("operators reject mismatched grids") {
  RealVectorField v(grid16);
  v[1] = Eigen::VectorXd::Zero(10);
  CHECK_THROWS_AS(RealVectorField(grid16, {Eigen::VectorXd::Zero(grid16.size()), Eigen::VectorXd::Zero(3),
                                           Eigen::VectorXd::Zero(grid16.size())}),
                  GridMismatch);
  CHECK_THROWS_AS(RealScalarField(grid16) + RealScalarField(Grid3(8, 2.0 * pi)), GridMismatch);
}

TEST_CASE("gradient of constant and of a resolved sine") {
  RealScalarField c(grid16);
  c.values.setConstant(3.25);
  const RealVectorField g = gradient(c);
  for (int a = 0; a < 3; ++a) CHECK(g[a].cwiseAbs().maxCoeff() < 1e-14);

  const double L = grid_box.length();
  const auto f = sample<double>(grid_box, [&](const Eigen::Vector3d& x) { return std::sin(2 * pi * x[0] / L); });
  const auto expect =
      sample<double>(grid_box, [&](const Eigen::Vector3d& x) { return (2 * pi / L) * std::cos(2 * pi * x[0] / L); });
  const RealVectorField gf = gradient(f);
  CHECK(relative_difference(gf[0], expect.values) < 1e-12);
  CHECK(gf[1].norm() < 1e-12 * expect.values.norm());
  CHECK(gf[2].norm() < 1e-12 * expect.values.norm());
}

TEST_CASE("divergence of gradient equals spectral Laplacian") {
  const auto f = random_complex_field(grid_box, 3, 11);
  CHECK(relative_difference(divergence(gradient(f)), laplacian(f)) < 1e-12);
  const auto r = random_real_field(grid16, 5, 12);
  CHECK(relative_difference(divergence(gradient(r)), laplacian(r)) < 1e-12);
}

TEST_CASE("vector identities") {
  const auto v = random_vector_field(grid_box, 3, 21);
  const auto f = random_real_field(grid_box, 3, 22);
  CHECK(norm(divergence(curl(v))) < 1e-12 * norm(curl(v)));
  CHECK(norm(curl(gradient(f))) < 1e-12 * norm(gradient(f)));
}

TEST_CASE("curl sign checked against finite differences") {
  const double L = grid16.length();
  auto vx = [&](const Eigen::Vector3d& x) { return std::cos(2 * pi * x[1] / L); };
  RealVectorField v(grid16);
  v[0] = sample<double>(grid16, vx).values;
  const RealVectorField c = curl(v);
  // curl_z = dv_y/dx - dv_x/dy by central differences on the analytic field.
  const double h = 1e-5;
  const auto fd = sample<double>(grid16, [&](const Eigen::Vector3d& x) {
    Eigen::Vector3d up = x, dn = x;
    up[1] += h;
    dn[1] -= h;
    return -(vx(up) - vx(dn)) / (2 * h);
  });
  CHECK((c[2] - fd.values).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(c[0].cwiseAbs().maxCoeff() < 1e-12);
  CHECK(c[1].cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transverse projector") {
  SUBCASE("longitudinal input vanishes") {
    const auto f = random_real_field(grid_box, 3, 31);
    CHECK(norm(transverse_project(gradient(f))) < 1e-12 * norm(gradient(f)));
  }
  SUBCASE("idempotent and divergence free") {
    const auto v = random_vector_field(grid_box, 4, 32);
    const auto p = transverse_project(v);
    CHECK(relative_difference(transverse_project(p), p) < 1e-12);
    CHECK(norm(divergence(p)) < 1e-12 * norm(p));
    CHECK(relative_divergence(p) < 1e-12);
  }
  SUBCASE("Pythagoras against a direct mode sum") {
    const auto v = random_vector_field(grid16, 5, 33);
    const auto p = transverse_project(v);
    const auto q = v - p;
    CHECK(std::abs(norm_squared(v) - norm_squared(p) - norm_squared(q)) < 1e-10 * norm_squared(v));
    // Oracle: sum over Fourier modes of |k.v_k|^2/|k|^2 gives the longitudinal power.
    std::array<Eigen::VectorXcd, 3> vk;
    for (int a = 0; a < 3; ++a) vk[static_cast<std::size_t>(a)] = to_fourier(RealScalarField(grid16, v[a]));
    double longitudinal = 0.0;
    for_each_wavevector(grid16, [&](Eigen::Index i, const Eigen::Vector3d& k) {
      if (k.squaredNorm() == 0.0) return;
      longitudinal += std::norm(k[0] * vk[0][i] + k[1] * vk[1][i] + k[2] * vk[2][i]) / k.squaredNorm();
    });
    longitudinal *= grid16.volume() / std::pow(static_cast<double>(grid16.size()), 2);
    CHECK(std::abs(norm_squared(q) - longitudinal) < 1e-10 * norm_squared(v));
  }
  SUBCASE("self-adjoint") {
    const auto u = random_vector_field(grid_box, 3, 34);
    const auto w = random_vector_field(grid_box, 3, 35);
    const complex lhs = inner_product(transverse_project(u), w);
    const complex rhs = inner_product(u, transverse_project(w));
    CHECK(std::abs(lhs - rhs) < 1e-10 * norm(u) * norm(w));
  }
  SUBCASE("zero mode kept or discarded") {
    RealVectorField c(grid16);
    c[0].setConstant(2.0);
    CHECK(transverse_project(c)[0].isApprox(c[0]));
    CHECK(transverse_project(c, ZeroMode::discard)[0].norm() < 1e-14);
  }
}

TEST_CASE("Coulomb solve") {
  CHECK(norm(solve_coulomb(RealScalarField(grid16))) == 0.0);

  const double L = grid_box.length();
  const double k0 = 2 * pi / L;
  const auto rho = sample<double>(grid_box, [&](const Eigen::Vector3d& x) { return std::cos(k0 * x[0]); });
  const auto expect = sample<double>(grid_box, [&](const Eigen::Vector3d& x) {
    return 4 * pi / (k0 * k0) * std::cos(k0 * x[0]);
  });
  CHECK(relative_difference(solve_coulomb(rho), expect) < 1e-12);

  // Non-neutral input: the mean is absorbed by the uniform background.
  auto r = random_real_field(grid16, 5, 41);
  r.values.array() += 0.7;
  const auto V = solve_coulomb(r);
  auto residual = laplacian(V);
  residual.values += 4 * pi * (r.values.array() - r.values.mean()).matrix();
  CHECK(norm(residual) < 1e-11 * 4 * pi * norm(r));
  CHECK(std::abs(V.values.mean()) < 1e-12 * V.values.cwiseAbs().maxCoeff());
}

TEST_CASE("Parseval and linearity") {
  const auto f = random_complex_field(grid_box, 3, 51);
  const auto g = random_complex_field(grid_box, 3, 52);
  const Eigen::VectorXcd fk = to_fourier(f), gk = to_fourier(g);
  const complex spectral = fk.dot(gk) * grid_box.volume() / std::pow(static_cast<double>(grid_box.size()), 2);
  CHECK(std::abs(inner_product(f, g) - spectral) < 1e-12 * norm(f) * norm(g));

  const double alpha = 0.37, beta = -1.91;
  const auto u = random_vector_field(grid_box, 3, 53);
  const auto v = random_vector_field(grid_box, 3, 54);
  const auto combo = alpha * u + beta * v;
  CHECK(relative_difference(curl(combo), alpha * curl(u) + beta * curl(v)) < 1e-12);
  CHECK(relative_difference(divergence(combo), alpha * divergence(u) + beta * divergence(v)) < 1e-12);
  CHECK(relative_difference(transverse_project(combo), alpha * transverse_project(u) + beta * transverse_project(v)) <
        1e-12);
  const auto a = random_real_field(grid_box, 3, 55);
  const auto b = random_real_field(grid_box, 3, 56);
  CHECK(relative_difference(gradient(alpha * a + beta * b), alpha * gradient(a) + beta * gradient(b)) < 1e-12);
  CHECK(relative_difference(solve_coulomb(alpha * a + beta * b), alpha * solve_coulomb(a) + beta * solve_coulomb(b)) <
        1e-12);
}

TEST_CASE("two-thirds dealiasing removes only the outer band") {
  const auto low = random_real_field(grid16, 5, 61);
  CHECK(relative_difference(dealias_two_thirds(low), low) < 1e-14);
  RealScalarField high = random_real_field(grid16, 7, 62);
  const auto cut = dealias_two_thirds(high);
  CHECK(norm(cut) < norm(high));
}

TEST_CASE("snapshot format") {
  const auto dir = std::filesystem::temp_directory_path() / "nrqed_snapshot_test";
  std::filesystem::create_directories(dir);
  const auto psi = random_complex_field(grid_box, 2, 71);
  const auto A = random_vector_field(grid_box, 2, 72);
  write_snapshot(dir / "psi.bin", psi, 0.125);
  write_snapshot(dir / "A.bin", A, 0.125);

  std::ifstream is(dir / "psi.bin", std::ios::binary);
  std::string header(64, '\0');
  is.read(header.data(), 64);
  CHECK(header.substr(0, 28) == "NRQEDF1 16 12 8 7.5 0.125 cs");
  CHECK(header[63] == '\n');
  CHECK(header.find_first_not_of(' ', 33) == 63);
  CHECK(std::filesystem::file_size(dir / "psi.bin") == 64 + 16 * static_cast<std::uintmax_t>(grid_box.size()));

  // Second sample's real part sits right after the first complex pair.
  is.seekg(64 + 16);
  double re1 = 0.0;
  is.read(reinterpret_cast<char*>(&re1), 8);
  CHECK(re1 == psi.values[1].real());

  const Snapshot s = read_snapshot(dir / "psi.bin");
  CHECK(s.time == 0.125);
  CHECK(std::get<ComplexScalarField>(s.field).values == psi.values);
  const Snapshot sa = read_snapshot(dir / "A.bin");
  CHECK(std::get<RealVectorField>(sa.field)[2] == A[2]);
  std::filesystem::remove_all(dir);
}
