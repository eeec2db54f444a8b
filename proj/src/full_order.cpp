#include "rlm/full_order.hpp"

#include "rlm/errors.hpp"

#include <cmath>
#include <numbers>

namespace rlm {

double InterfaceMesh::node_angle(int a) const { return 2.0 * std::numbers::pi * a / segments; }

std::vector<InterfaceQuadraturePoint> interface_quadrature(const Inclusion &disk, const InterfaceMesh &imesh,
                                                           double mesh_size) {
  if (disk.kind != Inclusion::Kind::Disk2D)
    throw UnsupportedError("the full-order oracle supports 2D disks only");
  if (imesh.segments < 3)
    throw ParameterError("interface mesh needs at least 3 segments");
  std::vector<double> gx, gw;
  gauss_legendre_unit(4, gx, gw);
  const double dtheta = 2.0 * std::numbers::pi / imesh.segments;
  const double seg_len = disk.radius * dtheta;
  int sub = 1;
  if (mesh_size > 0.0)
    sub = std::max(1, static_cast<int>(std::ceil(seg_len / (2.0 * mesh_size))));
  std::vector<InterfaceQuadraturePoint> pts;
  pts.reserve(static_cast<std::size_t>(imesh.segments) * sub * gx.size());
  for (int s = 0; s < imesh.segments; ++s)
    for (int j = 0; j < sub; ++j)
      for (std::size_t g = 0; g < gx.size(); ++g) {
        const double t = (j + gx[g]) / sub;
        const double theta = (s + t) * dtheta;
        pts.push_back({disk.boundary_point(theta), disk.radius * dtheta * gw[g] / sub, theta, s, t});
      }
  return pts;
}

FullOrderSolution solve_full_order(std::shared_ptr<const BulkOperator> bulk, const std::vector<Inclusion> &disks,
                                   const InterfaceMesh &imesh, const ProblemData &data, const SolverOptions &options) {
  const auto &space = bulk->space();
  if (space.dim() != 2)
    throw UnsupportedError("the full-order oracle is two dimensional only");
  validate_inclusions(space.mesh().domain(), disks);
  const int m = imesh.segments;
  std::vector<SparseMatrix> cs, ms;
  std::vector<Vector> gs;
  for (const auto &disk : disks) {
    const auto pts = interface_quadrature(disk, imesh, space.mesh().h());
    cs.push_back(assemble_trace_coupling(space, m, pts.size(), [&](std::size_t i, TraceEntry &e) {
      const auto &q = pts[i];
      e.x = q.x;
      e.rows.emplace_back(q.segment, q.weight * (1.0 - q.t));
      e.rows.emplace_back((q.segment + 1) % m, q.weight * q.t);
    }));
    Vector g = Vector::Zero(m);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(m, m);
    for (const auto &q : pts) {
      const int a = q.segment, b = (q.segment + 1) % m;
      const double gq = data.g(q.x);
      g[a] += q.weight * (1.0 - q.t) * gq;
      g[b] += q.weight * q.t * gq;
      mass(a, a) += q.weight * (1.0 - q.t) * (1.0 - q.t);
      mass(a, b) += q.weight * (1.0 - q.t) * q.t;
      mass(b, a) += q.weight * q.t * (1.0 - q.t);
      mass(b, b) += q.weight * q.t * q.t;
    }
    gs.push_back(std::move(g));
    if (data.kappa < 0.0)
      throw ParameterError("Robin parameter kappa must be non-negative");
    ms.push_back(data.kappa == 0.0 ? SparseMatrix(m, m) : SparseMatrix((data.kappa * mass).sparseView()));
  }
  const auto bc = DirichletConstraint::on_box_boundary(space, data.boundary);
  const Vector load = data.f ? assemble_load(space, data.f) : Vector::Zero(space.n_dofs());
  const auto sys = build_saddle_system(std::move(bulk), bc, load, cs, ms, gs);
  FullOrderSolution out;
  out.report = solve(sys, options);
  for (const auto &blk : sys.blocks)
    out.lambda.push_back(out.report.lambda.segment(blk.offset, blk.size));
  return out;
}

ErrorNorms reduction_gap(const FeSpace &space, const Vector &a, const Vector &b) {
  if (a.size() != space.n_dofs() || b.size() != space.n_dofs())
    throw ParameterError("reduction gap requires both solutions on the same bulk space");
  return norms(FeFunction(space, a - b));
}

ErrorNorms reduction_gap(const FeSpace &space, const SolveReport &full, const SolveReport &reduced) {
  return reduction_gap(space, full.u, reduced.u);
}

} // namespace rlm
