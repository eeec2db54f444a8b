#pragma once

#include "rlm/fem.hpp"

#include <memory>
#include <mutex>

namespace rlm {

/// Bulk block of the saddle system: the Q1 matrix on a box with the outer
/// boundary dofs eliminated, plus a lazily computed sparse Cholesky factor.
/// Shared read-only between all cases that use the same mesh.
class BulkOperator {
public:
  /// Stiffness matrix with the whole box boundary eliminated.
  static std::shared_ptr<const BulkOperator> stiffness(const FeSpace &space);
  /// Discrete H^1_0 Gram matrix (stiffness + mass), boundary eliminated.
  static std::shared_ptr<const BulkOperator> h1_gram(const FeSpace &space);

  BulkOperator(FeSpace space, SparseMatrix unconstrained, std::vector<char> fixed);
  ~BulkOperator();
  BulkOperator(const BulkOperator &) = delete;
  BulkOperator &operator=(const BulkOperator &) = delete;

  const FeSpace &space() const { return space_; }
  std::int64_t n_dofs() const { return space_.n_dofs(); }
  const SparseMatrix &unconstrained() const { return unconstrained_; }
  const SparseMatrix &matrix() const { return constrained_; }
  const std::vector<char> &fixed() const { return fixed_; }

  /// Solves with the constrained matrix. Factorizes on first use; throws
  /// SolverError if the matrix is not positive definite.
  Vector solve(const Vector &rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd &rhs) const;

private:
  struct Factor;
  const Factor &factor() const;

  FeSpace space_;
  SparseMatrix unconstrained_;
  SparseMatrix constrained_;
  std::vector<char> fixed_;
  mutable std::mutex mutex_;
  mutable std::unique_ptr<Factor> factor_;
};

} // namespace rlm
