#pragma once

#include "rlm/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <vector>

namespace rlm {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

using ScalarField = std::function<double(const Point &)>;
using GradientField = std::function<Point(const Point &)>;

/// A scalar field together with its gradient, used as the reference in
/// error computations.
struct ExactField {
  ScalarField value;
  GradientField gradient;
};

/// Tensor-product Gauss-Legendre rule on the reference cell [0,1]^dim.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;

  static QuadratureRule gauss(int dim, int points_per_axis);
};

/// 1D Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre_unit(int n, std::vector<double> &nodes, std::vector<double> &weights);

/// Q1 Lagrange space on a structured mesh; one dof per vertex.
class FeSpace {
public:
  explicit FeSpace(StructuredMesh mesh) : mesh_(std::move(mesh)) {}

  const StructuredMesh &mesh() const { return mesh_; }
  int dim() const { return mesh_.dim(); }
  int degree() const { return 1; }
  std::int64_t n_dofs() const { return mesh_.n_vertices(); }
  int dofs_per_cell() const { return 1 << dim(); }

  /// Values (and optionally gradients) of the local shape functions at
  /// reference point xi of a cell. Local ordering matches
  /// StructuredMesh::cell_vertices.
  void shape_values(const Point &xi, std::array<double, 8> &values) const;
  void shape_gradients(const Point &xi, std::array<Point, 8> &grads) const;

private:
  StructuredMesh mesh_;
};

/// Coefficient vector over an FeSpace.
struct FeFunction {
  FeSpace space;
  Vector coefficients;

  FeFunction(FeSpace s, Vector c);
};

SparseMatrix assemble_stiffness(const FeSpace &space);
SparseMatrix assemble_mass(const FeSpace &space);
Vector assemble_load(const FeSpace &space, const ScalarField &f);

/// Nodal interpolant of a field.
FeFunction interpolate(const FeSpace &space, const ScalarField &f);

/// Outer-boundary Dirichlet data: fixed flags and prescribed values per dof.
struct DirichletConstraint {
  std::vector<char> fixed;
  Vector values;

  static DirichletConstraint on_box_boundary(const FeSpace &space, const ScalarField &g);
  std::int64_t n_fixed() const;
};

/// Symmetric elimination: rhs -= A g, then fixed rows and columns are zeroed
/// with unit diagonal and rhs set to the prescribed value.
void constrain_dirichlet_boundary(SparseMatrix &matrix, Vector &rhs, const DirichletConstraint &bc);
/// Matrix part of the elimination only (rhs independent).
void constrain_matrix(SparseMatrix &matrix, const std::vector<char> &fixed);
/// Rhs part of the elimination for an unconstrained matrix.
void constrain_rhs(const SparseMatrix &unconstrained, Vector &rhs, const DirichletConstraint &bc);

double evaluate(const FeFunction &f, const Point &p);
Point evaluate_gradient(const FeFunction &f, const Point &p);

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

/// L2 and H1-seminorm of f - exact, 3-point Gauss per axis on every cell.
ErrorNorms error_norms(const FeFunction &f, const ExactField &exact);
/// Norms of f itself.
ErrorNorms norms(const FeFunction &f);

} // namespace rlm
