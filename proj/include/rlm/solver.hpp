#pragma once

#include "rlm/coupling.hpp"

namespace rlm {

enum class SolverPath {
  /// Cholesky of A + dense Cholesky of the Schur complement.
  Direct,
  /// Conjugate gradient on C A^-1 C^T + M with inner sparse A-solves.
  SchurCg,
};

struct SolverOptions {
  SolverPath path = SolverPath::Direct;
  double tolerance = 1e-10;
  int max_iterations = 1000;
};

struct SolveReport {
  Vector u;
  Vector lambda;
  double relative_residual = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

/// Solves the saddle system. Throws SolverError (naming the block) on
/// breakdown, EffortExceededError when CG does not converge, and
/// SolverError when the final residual exceeds the tolerance.
SolveReport solve(const SaddleSystem &system, const SolverOptions &options = {});

/// ||K x - b|| / ||b|| (absolute when b = 0).
double relative_residual(const SaddleSystem &system, const Vector &u, const Vector &lambda);

struct InfSupEstimate {
  double beta = 0.0;
  double h = 0.0;
  double epsilon = 0.0;
  int n = 0;
  double eigen_residual = 0.0;
};

/// beta_h = sqrt(lambda_min) of C A_norm^-1 C^T x = lambda M_Q x, where
/// `a_norm` already has the outer boundary eliminated and `coupling` has
/// zero columns on eliminated dofs.
InfSupEstimate estimate_infsup(const BulkOperator &a_norm, const SparseMatrix &coupling, const SparseMatrix &gram);

/// Convenience: builds the H^1_0 Gram matrix, the coupling of the given
/// inclusions and the modal Gram (entries 2 pi eps c_k, times the axial
/// mass for cylinders), then estimates beta_h. epsilon is taken from the
/// first inclusion.
InfSupEstimate estimate_infsup(const FeSpace &space, const std::vector<Inclusion> &inclusions, int n);

} // namespace rlm
