#pragma once

#include "rlm/solver.hpp"

namespace rlm {

/// Uniform polygonal mesh of a circle with P1 multipliers on its segments;
/// node a sits at angle 2 pi a / M and node M coincides with node 0.
struct InterfaceMesh {
  int segments = 64;

  static int minimum_segments(int n_max) { return std::max(16, 8 * (n_max + 1)); }
  double node_angle(int a) const;
};

/// Gamma quadrature for the full-order coupling: 4-point Gauss per segment,
/// each segment split so that the sample spacing stays below h/2, with the
/// points mapped onto the exact circle.
struct InterfaceQuadraturePoint {
  Point x{};
  double weight = 0.0;
  double theta = 0.0;
  int segment = 0;
  double t = 0.0;
};
std::vector<InterfaceQuadraturePoint> interface_quadrature(const Inclusion &disk, const InterfaceMesh &imesh,
                                                           double mesh_size);

struct FullOrderSolution {
  SolveReport report;
  /// Nodal multiplier values per inclusion (segments entries each).
  std::vector<Vector> lambda;
};

/// Full (non-reduced) multiplier solve for 2D disks.
FullOrderSolution solve_full_order(std::shared_ptr<const BulkOperator> bulk, const std::vector<Inclusion> &disks,
                                   const InterfaceMesh &imesh, const ProblemData &data,
                                   const SolverOptions &options = {});

/// L2 and H1-seminorm of the difference of two bulk solutions on `space`.
/// Throws ParameterError when the coefficient vectors do not match.
ErrorNorms reduction_gap(const FeSpace &space, const Vector &a, const Vector &b);
ErrorNorms reduction_gap(const FeSpace &space, const SolveReport &full, const SolveReport &reduced);

} // namespace rlm
