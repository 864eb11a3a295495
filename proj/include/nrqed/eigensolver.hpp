#pragma once

#include "nrqed/errors.hpp"
#include "nrqed/hamiltonian.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace nrqed {

struct LanczosResult {
  Eigen::VectorXd eigenvalues;    // ascending
  Eigen::MatrixXcd eigenvectors;  // columns; empty unless requested
  std::vector<double> residuals;  // ||H v - lambda v|| per eigenpair
  int iterations = 0;             // matrix-vector products in total
  /// Lowest Ritz value after each iteration of the first run.
  std::vector<double> ritz_history;
};

/// Carries the best residual reached when Lanczos runs out of iterations.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best) : NumericalError(what), best_(std::move(best)) {}
  const std::vector<double>& best_residuals() const { return best_; }

 private:
  std::vector<double> best_;
};

/// y = H x over both triangles. Rows are split over workers, each row summed
/// in a fixed order, so the result does not depend on `workers`.
Eigen::VectorXcd apply(const SparseHamiltonian& h, const Eigen::VectorXcd& x, int workers = 1);

/// Lowest n_eigs eigenvalues by Lanczos with full reorthogonalization. One
/// eigenpair is locked per run and later runs are kept orthogonal to it, which
/// resolves degenerate levels. Converged when ||H v - lambda v|| <= tol ||H||_1.
/// The start vector of run r is all ones plus a seeded perturbation.
/// Throws ConvergenceError if max_iter iterations of one run do not suffice.
LanczosResult lanczos(const SparseHamiltonian& h, int n_eigs, double tol, int max_iter, std::uint64_t seed,
                      bool want_vectors = false, int workers = 1);

/// All eigenvalues, ascending, from a dense self-adjoint solver.
Eigen::VectorXd dense_eigenvalues(const SparseHamiltonian& h);

/// Real diagonal of h.
Eigen::VectorXd diagonal_of(const SparseHamiltonian& h);

/// Rayleigh-Schrodinger  sum_{m != s} |V_ms|^2 / (E_s - E_m)  with E = h0_diag.
/// Throws NumericalError when a coupled level is degenerate with s.
double second_order_shift(const Eigen::VectorXd& h0_diag, const SparseHamiltonian& v, Eigen::Index s);

}  // namespace nrqed
