#include "rlm/coupling.hpp"

#include "rlm/errors.hpp"

#include <vector>

namespace rlm {

InclusionBlock make_inclusion_block(const FeSpace &space, const Inclusion &inc, int n, int angular_points) {
  ModalBasis basis(n);
  BoundaryQuadratureOptions opt;
  opt.mesh_size = space.mesh().h();
  opt.angular_points = angular_points;
  if (inc.kind == Inclusion::Kind::Cylinder3D)
    opt.axial_nodes = conforming_axial_nodes(space.mesh(), inc);
  auto quad = build_boundary_quadrature(inc, basis, opt);
  auto layout = multiplier_layout(basis, quad);
  return {inc, basis, std::move(quad), layout};
}

SparseMatrix assemble_trace_coupling(const FeSpace &space, int n_rows, std::size_t n_points,
                                     const std::function<void(std::size_t, TraceEntry &)> &entry) {
  const auto &mesh = space.mesh();
  std::vector<Eigen::Triplet<double>> triplets;
  std::array<std::int64_t, 8> dofs;
  std::array<double, 8> psi;
  TraceEntry e;
  for (std::size_t q = 0; q < n_points; ++q) {
    e.rows.clear();
    entry(q, e);
    CellIndex cell;
    try {
      cell = mesh.locate(e.x);
    } catch (const OutOfDomainError &) {
      throw GeometryError("Gamma quadrature point lies outside the bulk domain");
    }
    const int nloc = mesh.cell_vertices(cell, dofs);
    space.shape_values(mesh.reference_coordinates(cell, e.x), psi);
    for (const auto &[row, w] : e.rows)
      for (int l = 0; l < nloc; ++l)
        if (psi[l] != 0.0)
          triplets.emplace_back(row, static_cast<int>(dofs[l]), w * psi[l]);
  }
  SparseMatrix c(n_rows, static_cast<int>(space.n_dofs()));
  c.setFromTriplets(triplets.begin(), triplets.end());
  return c;
}

SparseMatrix assemble_coupling(const FeSpace &space, const InclusionBlock &block) {
  const auto &quad = block.quad;
  const auto &layout = block.layout;
  return assemble_trace_coupling(space, layout.size(), quad.points.size(), [&](std::size_t i, TraceEntry &e) {
    const auto &q = quad.points[i];
    e.x = q.x;
    std::array<int, 2> nodes;
    std::array<double, 2> chi;
    const int na = quad.active_nodes(q, nodes, chi);
    for (int l = 0; l < na; ++l)
      for (int k = 0; k < layout.n_modes; ++k)
        e.rows.emplace_back(layout.index(nodes[l], k), q.weight * chi[l] * block.basis.eval(k, q.theta));
  });
}

Vector assemble_constraint_rhs(const ScalarField &g, const InclusionBlock &block) {
  const auto &quad = block.quad;
  const auto &layout = block.layout;
  Vector rhs = Vector::Zero(layout.size());
  std::array<int, 2> nodes;
  std::array<double, 2> chi;
  for (const auto &q : quad.points) {
    const double gq = g(q.x);
    if (gq == 0.0)
      continue;
    const int na = quad.active_nodes(q, nodes, chi);
    for (int l = 0; l < na; ++l)
      for (int k = 0; k < layout.n_modes; ++k)
        rhs[layout.index(nodes[l], k)] += q.weight * chi[l] * block.basis.eval(k, q.theta) * gq;
  }
  return rhs;
}

SparseMatrix assemble_robin(const InclusionBlock &block, double kappa) {
  if (!(kappa >= 0.0))
    throw ParameterError("Robin parameter kappa must be non-negative");
  const auto &quad = block.quad;
  const auto &layout = block.layout;
  SparseMatrix m(layout.size(), layout.size());
  if (kappa == 0.0)
    return m;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(layout.size(), layout.size());
  std::array<int, 2> nodes;
  std::array<double, 2> chi;
  std::vector<double> phi(layout.n_modes);
  for (const auto &q : quad.points) {
    const int na = quad.active_nodes(q, nodes, chi);
    for (int k = 0; k < layout.n_modes; ++k)
      phi[k] = block.basis.eval(k, q.theta);
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < na; ++b)
        for (int k = 0; k < layout.n_modes; ++k)
          for (int l = 0; l < layout.n_modes; ++l)
            dense(layout.index(nodes[a], k), layout.index(nodes[b], l)) +=
                kappa * q.weight * chi[a] * chi[b] * phi[k] * phi[l];
  }
  // Products of distinct modes integrate to rounding noise; keep the block
  // exactly block-diagonal in the modes.
  for (int r = 0; r < layout.size(); ++r)
    for (int c = 0; c < layout.size(); ++c)
      if (r % layout.n_modes != c % layout.n_modes)
        dense(r, c) = 0.0;
  dense = 0.5 * (dense + dense.transpose()).eval();
  m = dense.sparseView();
  return m;
}

SparseMatrix SaddleSystem::matrix() const {
  const auto nb = n_bulk();
  const auto nm = n_multipliers();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(bulk->matrix().nonZeros() + 2 * coupling.nonZeros() + robin.nonZeros());
  const auto &a = bulk->matrix();
  for (int col = 0; col < a.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(a, col); it; ++it)
      t.emplace_back(it.row(), col, it.value());
  for (int col = 0; col < coupling.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(coupling, col); it; ++it) {
      t.emplace_back(static_cast<int>(nb + it.row()), col, it.value());
      t.emplace_back(col, static_cast<int>(nb + it.row()), it.value());
    }
  for (int col = 0; col < robin.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(robin, col); it; ++it)
      t.emplace_back(static_cast<int>(nb + it.row()), static_cast<int>(nb + col), -it.value());
  SparseMatrix k(static_cast<int>(nb + nm), static_cast<int>(nb + nm));
  k.setFromTriplets(t.begin(), t.end());
  return k;
}

Vector SaddleSystem::rhs() const {
  Vector r(size());
  r << bulk_rhs, constraint_rhs;
  return r;
}

SaddleSystem build_saddle_system(std::shared_ptr<const BulkOperator> bulk, const DirichletConstraint &bc,
                                 const Vector &bulk_load, const std::vector<SparseMatrix> &couplings,
                                 const std::vector<SparseMatrix> &robins, const std::vector<Vector> &constraint_rhs) {
  const auto nb = bulk->n_dofs();
  if (bulk_load.size() != nb || static_cast<std::int64_t>(bc.fixed.size()) != nb)
    throw ParameterError("bulk rhs size does not match the bulk block");
  if (couplings.size() != robins.size() || couplings.size() != constraint_rhs.size())
    throw ParameterError("inconsistent number of multiplier blocks");
  if (bc.fixed != bulk->fixed())
    throw ParameterError("Dirichlet constraint does not match the eliminated dofs of the bulk block");

  SaddleSystem s;
  s.bulk = bulk;
  s.bulk_rhs = bulk_load;
  constrain_rhs(bulk->unconstrained(), s.bulk_rhs, bc);

  Eigen::Index total = 0;
  for (std::size_t b = 0; b < couplings.size(); ++b) {
    const auto rows = couplings[b].rows();
    if (couplings[b].cols() != nb || constraint_rhs[b].size() != rows || robins[b].rows() != rows ||
        robins[b].cols() != rows)
      throw ParameterError("dimension mismatch in multiplier block " + std::to_string(b));
    s.blocks.push_back({total, rows});
    total += rows;
  }

  Vector boundary_values = Vector::Zero(nb);
  for (Eigen::Index i = 0; i < nb; ++i)
    if (bc.fixed[i])
      boundary_values[i] = bc.values[i];

  std::vector<Eigen::Triplet<double>> ct, mt;
  s.constraint_rhs = Vector::Zero(total);
  for (std::size_t b = 0; b < couplings.size(); ++b) {
    const auto off = s.blocks[b].offset;
    const auto &c = couplings[b];
    Vector g = constraint_rhs[b] - c * boundary_values;
    s.constraint_rhs.segment(off, g.size()) = g;
    for (int col = 0; col < c.outerSize(); ++col)
      if (!bc.fixed[col])
        for (SparseMatrix::InnerIterator it(c, col); it; ++it)
          ct.emplace_back(static_cast<int>(off + it.row()), col, it.value());
    for (int col = 0; col < robins[b].outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(robins[b], col); it; ++it)
        mt.emplace_back(static_cast<int>(off + it.row()), static_cast<int>(off + col), it.value());
  }
  s.coupling.resize(static_cast<int>(total), static_cast<int>(nb));
  s.coupling.setFromTriplets(ct.begin(), ct.end());
  s.robin.resize(static_cast<int>(total), static_cast<int>(total));
  s.robin.setFromTriplets(mt.begin(), mt.end());
  return s;
}

ReducedSystem assemble_reduced_system(std::shared_ptr<const BulkOperator> bulk, const std::vector<Inclusion> &inclusions,
                                      int n, const ProblemData &data) {
  const auto &space = bulk->space();
  validate_inclusions(space.mesh().domain(), inclusions);
  ReducedSystem out;
  std::vector<SparseMatrix> cs, ms;
  std::vector<Vector> gs;
  for (const auto &inc : inclusions) {
    auto block = make_inclusion_block(space, inc, n);
    cs.push_back(assemble_coupling(space, block));
    ms.push_back(assemble_robin(block, data.kappa));
    gs.push_back(assemble_constraint_rhs(data.g, block));
    out.blocks.push_back(std::move(block));
  }
  const auto bc = DirichletConstraint::on_box_boundary(space, data.boundary);
  const Vector load = data.f ? assemble_load(space, data.f) : Vector::Zero(space.n_dofs());
  out.system = build_saddle_system(std::move(bulk), bc, load, cs, ms, gs);
  return out;
}

} // namespace rlm
