#include "rlm/fem.hpp"

#include "rlm/errors.hpp"

#include <cmath>

namespace rlm {

void gauss_legendre_unit(int n, std::vector<double> &nodes, std::vector<double> &weights) {
  nodes.clear();
  weights.clear();
  switch (n) {
  case 1:
    nodes = {0.0};
    weights = {2.0};
    break;
  case 2: {
    const double a = 1.0 / std::sqrt(3.0);
    nodes = {-a, a};
    weights = {1.0, 1.0};
    break;
  }
  case 3: {
    const double a = std::sqrt(3.0 / 5.0);
    nodes = {-a, 0.0, a};
    weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    break;
  }
  case 4: {
    const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
    const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
    nodes = {-b, -a, a, b};
    weights = {wb, wa, wa, wb};
    break;
  }
  default:
    throw ParameterError("Gauss rule with " + std::to_string(n) + " points is not tabulated");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = 0.5 * (nodes[i] + 1.0);
    weights[i] *= 0.5;
  }
}

QuadratureRule QuadratureRule::gauss(int dim, int points_per_axis) {
  std::vector<double> x, w;
  gauss_legendre_unit(points_per_axis, x, w);
  QuadratureRule rule;
  const int nz = dim == 3 ? points_per_axis : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < points_per_axis; ++j)
      for (int i = 0; i < points_per_axis; ++i) {
        rule.points.push_back({x[i], x[j], dim == 3 ? x[k] : 0.0});
        rule.weights.push_back(w[i] * w[j] * (dim == 3 ? w[k] : 1.0));
      }
  return rule;
}

void FeSpace::shape_values(const Point &xi, std::array<double, 8> &values) const {
  const int nloc = dofs_per_cell();
  for (int l = 0; l < nloc; ++l) {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a)
      v *= ((l >> a) & 1) ? xi[a] : 1.0 - xi[a];
    values[l] = v;
  }
}

void FeSpace::shape_gradients(const Point &xi, std::array<Point, 8> &grads) const {
  const int nloc = dofs_per_cell();
  for (int l = 0; l < nloc; ++l) {
    Point g{};
    for (int a = 0; a < dim(); ++a) {
      double d = ((l >> a) & 1) ? 1.0 : -1.0;
      for (int b = 0; b < dim(); ++b)
        if (b != a)
          d *= ((l >> b) & 1) ? xi[b] : 1.0 - xi[b];
      g[a] = d / mesh_.spacing(a);
    }
    grads[l] = g;
  }
}

FeFunction::FeFunction(FeSpace s, Vector c) : space(std::move(s)), coefficients(std::move(c)) {
  if (coefficients.size() != space.n_dofs())
    throw ParameterError("coefficient vector length does not match the dof count");
}

namespace {

using ElementMatrix = std::array<std::array<double, 8>, 8>;

ElementMatrix element_stiffness(const FeSpace &space) {
  const auto rule = QuadratureRule::gauss(space.dim(), 2);
  const double vol = space.mesh().cell_volume();
  ElementMatrix k{};
  std::array<Point, 8> g;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    space.shape_gradients(rule.points[q], g);
    for (int a = 0; a < space.dofs_per_cell(); ++a)
      for (int b = 0; b < space.dofs_per_cell(); ++b) {
        double dot = 0.0;
        for (int d = 0; d < space.dim(); ++d)
          dot += g[a][d] * g[b][d];
        k[a][b] += rule.weights[q] * vol * dot;
      }
  }
  return k;
}

ElementMatrix element_mass(const FeSpace &space) {
  const auto rule = QuadratureRule::gauss(space.dim(), 2);
  const double vol = space.mesh().cell_volume();
  ElementMatrix m{};
  std::array<double, 8> v;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    space.shape_values(rule.points[q], v);
    for (int a = 0; a < space.dofs_per_cell(); ++a)
      for (int b = 0; b < space.dofs_per_cell(); ++b)
        m[a][b] += rule.weights[q] * vol * v[a] * v[b];
  }
  return m;
}

// Builds the global matrix of a translation-invariant element matrix
// column by column, directly in compressed form.
SparseMatrix assemble_uniform(const FeSpace &space, const ElementMatrix &elem) {
  const auto &mesh = space.mesh();
  const int dim = space.dim();
  const std::int64_t n = mesh.cells_per_side();
  const std::int64_t ndofs = space.n_dofs();
  const int stencil = dim == 3 ? 27 : 9;

  SparseMatrix mat(static_cast<int>(ndofs), static_cast<int>(ndofs));
  mat.reserve(Eigen::VectorXi::Constant(static_cast<int>(ndofs), stencil));

  const int kmin = dim == 3 ? -1 : 0;
  const int kmax = dim == 3 ? 1 : 0;
  for (std::int64_t col = 0; col < ndofs; ++col) {
    const auto mc = mesh.vertex_multi_index(col);
    for (int dk = kmin; dk <= kmax; ++dk)
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const std::array<std::int64_t, 3> mr{mc[0] + di, mc[1] + dj, mc[2] + dk};
          bool valid = true;
          for (int a = 0; a < dim; ++a)
            valid = valid && mr[a] >= 0 && mr[a] <= n;
          if (!valid)
            continue;
          // Cells containing both vertices: lower corner c with
          // max(mr,mc)-1 <= c <= min(mr,mc), 0 <= c < n.
          std::array<std::int64_t, 3> lo{}, hi{};
          for (int a = 0; a < dim; ++a) {
            lo[a] = std::max<std::int64_t>(std::max(mr[a], mc[a]) - 1, 0);
            hi[a] = std::min<std::int64_t>(std::min(mr[a], mc[a]), n - 1);
          }
          double value = 0.0;
          for (std::int64_t ck = lo[2]; ck <= hi[2]; ++ck)
            for (std::int64_t cj = lo[1]; cj <= hi[1]; ++cj)
              for (std::int64_t ci = lo[0]; ci <= hi[0]; ++ci) {
                const std::array<std::int64_t, 3> c{ci, cj, ck};
                int lr = 0, lc = 0;
                for (int a = 0; a < dim; ++a) {
                  lr |= static_cast<int>(mr[a] - c[a]) << a;
                  lc |= static_cast<int>(mc[a] - c[a]) << a;
                }
                value += elem[lr][lc];
              }
          const auto row = mesh.vertex_id(mr[0], mr[1], mr[2]);
          mat.insert(static_cast<int>(row), static_cast<int>(col)) = value;
        }
  }
  mat.makeCompressed();
  return mat;
}

} // namespace

SparseMatrix assemble_stiffness(const FeSpace &space) { return assemble_uniform(space, element_stiffness(space)); }

SparseMatrix assemble_mass(const FeSpace &space) { return assemble_uniform(space, element_mass(space)); }

Vector assemble_load(const FeSpace &space, const ScalarField &f) {
  const auto &mesh = space.mesh();
  const auto rule = QuadratureRule::gauss(space.dim(), 2);
  const double vol = mesh.cell_volume();
  Vector load = Vector::Zero(space.n_dofs());
  std::array<std::int64_t, 8> dofs;
  std::array<double, 8> phi;
  for (std::int64_t c = 0; c < mesh.n_cells(); ++c) {
    const auto cell = mesh.cell_index(c);
    const auto lower = mesh.cell_lower(cell);
    const int nloc = mesh.cell_vertices(cell, dofs);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Point x{};
      for (int a = 0; a < space.dim(); ++a)
        x[a] = lower[a] + rule.points[q][a] * mesh.spacing(a);
      const double fx = f(x);
      if (fx == 0.0)
        continue;
      space.shape_values(rule.points[q], phi);
      for (int l = 0; l < nloc; ++l)
        load[dofs[l]] += rule.weights[q] * vol * fx * phi[l];
    }
  }
  return load;
}

FeFunction interpolate(const FeSpace &space, const ScalarField &f) {
  Vector c(space.n_dofs());
  for (std::int64_t i = 0; i < space.n_dofs(); ++i)
    c[i] = f(space.mesh().vertex(i));
  return FeFunction(space, std::move(c));
}

DirichletConstraint DirichletConstraint::on_box_boundary(const FeSpace &space, const ScalarField &g) {
  DirichletConstraint bc;
  const auto n = space.n_dofs();
  bc.fixed.assign(n, 0);
  bc.values = Vector::Zero(n);
  for (std::int64_t i = 0; i < n; ++i)
    if (space.mesh().on_boundary(i)) {
      bc.fixed[i] = 1;
      bc.values[i] = g(space.mesh().vertex(i));
    }
  return bc;
}

std::int64_t DirichletConstraint::n_fixed() const {
  std::int64_t c = 0;
  for (char f : fixed)
    c += f ? 1 : 0;
  return c;
}

void constrain_matrix(SparseMatrix &matrix, const std::vector<char> &fixed) {
  for (int col = 0; col < matrix.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it)
      if (fixed[it.row()] || fixed[col])
        it.valueRef() = it.row() == col ? 1.0 : 0.0;
  matrix.prune([](int row, int col, double value) { return row == col || value != 0.0; });
}

void constrain_rhs(const SparseMatrix &unconstrained, Vector &rhs, const DirichletConstraint &bc) {
  Vector g = Vector::Zero(rhs.size());
  for (Eigen::Index i = 0; i < rhs.size(); ++i)
    if (bc.fixed[i])
      g[i] = bc.values[i];
  rhs -= unconstrained * g;
  for (Eigen::Index i = 0; i < rhs.size(); ++i)
    if (bc.fixed[i])
      rhs[i] = bc.values[i];
}

void constrain_dirichlet_boundary(SparseMatrix &matrix, Vector &rhs, const DirichletConstraint &bc) {
  constrain_rhs(matrix, rhs, bc);
  constrain_matrix(matrix, bc.fixed);
}

namespace {

struct CellEval {
  double value = 0.0;
  Point gradient{};
};

CellEval eval_in_cell(const FeFunction &f, const CellIndex &cell, const Point &xi, bool with_gradient) {
  const auto &space = f.space;
  std::array<std::int64_t, 8> dofs;
  const int nloc = space.mesh().cell_vertices(cell, dofs);
  std::array<double, 8> phi;
  space.shape_values(xi, phi);
  CellEval e;
  for (int l = 0; l < nloc; ++l)
    e.value += f.coefficients[dofs[l]] * phi[l];
  if (with_gradient) {
    std::array<Point, 8> g;
    space.shape_gradients(xi, g);
    for (int l = 0; l < nloc; ++l)
      for (int a = 0; a < space.dim(); ++a)
        e.gradient[a] += f.coefficients[dofs[l]] * g[l][a];
  }
  return e;
}

} // namespace

double evaluate(const FeFunction &f, const Point &p) {
  const auto cell = f.space.mesh().locate(p);
  return eval_in_cell(f, cell, f.space.mesh().reference_coordinates(cell, p), false).value;
}

Point evaluate_gradient(const FeFunction &f, const Point &p) {
  const auto cell = f.space.mesh().locate(p);
  return eval_in_cell(f, cell, f.space.mesh().reference_coordinates(cell, p), true).gradient;
}

namespace {

ErrorNorms integrate_error(const FeFunction &f, const ExactField *exact) {
  const auto &space = f.space;
  const auto &mesh = space.mesh();
  const auto rule = QuadratureRule::gauss(space.dim(), 3);
  const double vol = mesh.cell_volume();
  double l2 = 0.0, h1 = 0.0;
  for (std::int64_t c = 0; c < mesh.n_cells(); ++c) {
    const auto cell = mesh.cell_index(c);
    const auto lower = mesh.cell_lower(cell);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto e = eval_in_cell(f, cell, rule.points[q], true);
      double diff = e.value;
      Point gdiff = e.gradient;
      if (exact) {
        Point x{};
        for (int a = 0; a < space.dim(); ++a)
          x[a] = lower[a] + rule.points[q][a] * mesh.spacing(a);
        diff -= exact->value(x);
        const Point ge = exact->gradient(x);
        for (int a = 0; a < space.dim(); ++a)
          gdiff[a] -= ge[a];
      }
      const double w = rule.weights[q] * vol;
      l2 += w * diff * diff;
      for (int a = 0; a < space.dim(); ++a)
        h1 += w * gdiff[a] * gdiff[a];
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

} // namespace

ErrorNorms error_norms(const FeFunction &f, const ExactField &exact) { return integrate_error(f, &exact); }

ErrorNorms norms(const FeFunction &f) { return integrate_error(f, nullptr); }

} // namespace rlm
