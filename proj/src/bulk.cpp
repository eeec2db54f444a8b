#include "rlm/bulk.hpp"

#include "rlm/errors.hpp"

#include <Eigen/CholmodSupport>

namespace rlm {

struct BulkOperator::Factor {
  Eigen::CholmodSupernodalLLT<SparseMatrix> llt;
};

namespace {

std::vector<char> box_boundary(const FeSpace &space) {
  std::vector<char> fixed(space.n_dofs(), 0);
  for (std::int64_t i = 0; i < space.n_dofs(); ++i)
    fixed[i] = space.mesh().on_boundary(i) ? 1 : 0;
  return fixed;
}

} // namespace

std::shared_ptr<const BulkOperator> BulkOperator::stiffness(const FeSpace &space) {
  return std::make_shared<const BulkOperator>(space, assemble_stiffness(space), box_boundary(space));
}

std::shared_ptr<const BulkOperator> BulkOperator::h1_gram(const FeSpace &space) {
  SparseMatrix gram = assemble_stiffness(space) + assemble_mass(space);
  return std::make_shared<const BulkOperator>(space, std::move(gram), box_boundary(space));
}

BulkOperator::BulkOperator(FeSpace space, SparseMatrix unconstrained, std::vector<char> fixed)
    : space_(std::move(space)), unconstrained_(std::move(unconstrained)), fixed_(std::move(fixed)) {
  if (unconstrained_.rows() != space_.n_dofs() || unconstrained_.cols() != space_.n_dofs() ||
      static_cast<std::int64_t>(fixed_.size()) != space_.n_dofs())
    throw ParameterError("bulk matrix does not match the finite element space");
  constrained_ = unconstrained_;
  constrain_matrix(constrained_, fixed_);
}

BulkOperator::~BulkOperator() = default;

const BulkOperator::Factor &BulkOperator::factor() const {
  std::lock_guard lock(mutex_);
  if (!factor_) {
    auto f = std::make_unique<Factor>();
    f->llt.compute(constrained_);
    if (f->llt.info() != Eigen::Success)
      throw SolverError("Cholesky factorization of the bulk block A failed (not positive definite)");
    factor_ = std::move(f);
  }
  return *factor_;
}

Vector BulkOperator::solve(const Vector &rhs) const {
  const auto &f = factor();
  std::lock_guard lock(mutex_);
  Vector x = f.llt.solve(rhs);
  if (f.llt.info() != Eigen::Success)
    throw SolverError("bulk block solve failed");
  return x;
}

Eigen::MatrixXd BulkOperator::solve(const Eigen::MatrixXd &rhs) const {
  const auto &f = factor();
  std::lock_guard lock(mutex_);
  Eigen::MatrixXd x = f.llt.solve(rhs);
  if (f.llt.info() != Eigen::Success)
    throw SolverError("bulk block solve failed");
  return x;
}

} // namespace rlm
