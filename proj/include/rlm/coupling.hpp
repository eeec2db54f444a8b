#pragma once

#include "rlm/bulk.hpp"
#include "rlm/modal.hpp"

#include <memory>
#include <vector>

namespace rlm {

/// Data of the transmission problem: bulk source f, inclusion datum g on
/// Gamma, outer boundary datum, Robin parameter kappa (0 = Dirichlet).
struct ProblemData {
  ScalarField f;
  ScalarField g;
  ScalarField boundary;
  double kappa = 0.0;
};

/// Everything needed to couple one inclusion: geometry, modes, Gamma
/// quadrature and the multiplier layout.
struct InclusionBlock {
  Inclusion inclusion;
  ModalBasis basis;
  BoundaryQuadrature quad;
  MultiplierLayout layout;
};

/// Builds the Gamma quadrature resolved against the mesh of `space`; for
/// cylinders the axial multiplier nodes sit on the bulk mesh planes.
InclusionBlock make_inclusion_block(const FeSpace &space, const Inclusion &inc, int n,
                                    int angular_points = 0);

/// One quadrature point of a trace coupling: location and the (row, weight)
/// pairs it contributes to.
struct TraceEntry {
  Point x{};
  std::vector<std::pair<int, double>> rows;
};

/// Generic trace coupling C[r, j] = sum_q rows_q(r) psi_j(x_q).
SparseMatrix assemble_trace_coupling(const FeSpace &space, int n_rows, std::size_t n_points,
                                     const std::function<void(std::size_t, TraceEntry &)> &entry);

/// C[(a,k), j] = sum_q w_q phi_k(theta_q) chi_a(z_q) psi_j(x_q).
SparseMatrix assemble_coupling(const FeSpace &space, const InclusionBlock &block);
/// G[(a,k)] = sum_q w_q g(x_q) phi_k(theta_q) chi_a(z_q).
Vector assemble_constraint_rhs(const ScalarField &g, const InclusionBlock &block);
/// M[(a,k),(b,l)] = kappa sum_q w_q phi_k phi_l chi_a chi_b. Throws
/// ParameterError for negative kappa.
SparseMatrix assemble_robin(const InclusionBlock &block, double kappa);

struct MultiplierRange {
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
};

/// The block system [[A, C^T], [C, -M]] [u; Lambda] = [F; G] with A the
/// boundary-eliminated bulk matrix. Columns of C on eliminated dofs are
/// zero; their contribution has been moved into G.
struct SaddleSystem {
  std::shared_ptr<const BulkOperator> bulk;
  SparseMatrix coupling;
  SparseMatrix robin;
  Vector bulk_rhs;
  Vector constraint_rhs;
  std::vector<MultiplierRange> blocks;

  Eigen::Index n_bulk() const { return bulk_rhs.size(); }
  Eigen::Index n_multipliers() const { return constraint_rhs.size(); }
  Eigen::Index size() const { return n_bulk() + n_multipliers(); }
  /// Assembled global matrix (for residual checks and tests).
  SparseMatrix matrix() const;
  Vector rhs() const;
};

/// Stacks C and G, applies the outer Dirichlet elimination to F (from the
/// unconstrained bulk matrix) and to C/G. Throws ParameterError on size
/// mismatch.
SaddleSystem build_saddle_system(std::shared_ptr<const BulkOperator> bulk, const DirichletConstraint &bc,
                                 const Vector &bulk_load, const std::vector<SparseMatrix> &couplings,
                                 const std::vector<SparseMatrix> &robins, const std::vector<Vector> &constraint_rhs);

/// Reduced Lagrange multiplier system for a set of inclusions sharing the
/// Fourier order n.
struct ReducedSystem {
  SaddleSystem system;
  std::vector<InclusionBlock> blocks;
};

ReducedSystem assemble_reduced_system(std::shared_ptr<const BulkOperator> bulk, const std::vector<Inclusion> &inclusions,
                                      int n, const ProblemData &data);

} // namespace rlm
