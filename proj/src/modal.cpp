#include "rlm/modal.hpp"

#include "rlm/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rlm {

Inclusion Inclusion::disk(double cx, double cy, double radius) {
  Inclusion inc;
  inc.kind = Kind::Disk2D;
  inc.center = {cx, cy, 0.0};
  inc.radius = radius;
  return inc;
}

Inclusion Inclusion::cylinder(int axis, const Point &center, double lo, double hi, double radius) {
  Inclusion inc;
  inc.kind = Kind::Cylinder3D;
  inc.axis = axis;
  inc.center = center;
  inc.center[axis] = 0.0;
  inc.axial_lo = lo;
  inc.axial_hi = hi;
  inc.radius = radius;
  return inc;
}

double Inclusion::boundary_measure() const {
  const double c = 2.0 * std::numbers::pi * radius;
  return kind == Kind::Disk2D ? c : c * length();
}

std::array<int, 2> Inclusion::transverse_axes() const {
  if (kind == Kind::Disk2D)
    return {0, 1};
  return {(axis + 1) % 3, (axis + 2) % 3};
}

Point Inclusion::boundary_point(double theta, double axial) const {
  const auto [u, v] = transverse_axes();
  Point p = center;
  p[u] += radius * std::cos(theta);
  p[v] += radius * std::sin(theta);
  if (kind == Kind::Cylinder3D)
    p[axis] = axial;
  return p;
}

double Inclusion::angle_of(const Point &p) const {
  const auto [u, v] = transverse_axes();
  return std::atan2(p[v] - center[v], p[u] - center[u]);
}

double Inclusion::radial_distance(const Point &p) const {
  const auto [u, v] = transverse_axes();
  return std::hypot(p[u] - center[u], p[v] - center[v]);
}

void Inclusion::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw GeometryError("inclusion radius must be positive");
  if (kind == Kind::Cylinder3D) {
    if (axis < 0 || axis > 2)
      throw GeometryError("cylinder axis must be 0, 1 or 2");
    if (!(axial_hi > axial_lo))
      throw GeometryError("cylinder axial range must have positive length");
  }
}

namespace {

// Axis-aligned bounding box of the closed inclusion.
std::pair<Point, Point> bounding_box(const Inclusion &inc) {
  Point lo = inc.center, hi = inc.center;
  for (int a : inc.transverse_axes()) {
    lo[a] -= inc.radius;
    hi[a] += inc.radius;
  }
  if (inc.kind == Inclusion::Kind::Cylinder3D) {
    lo[inc.axis] = inc.axial_lo;
    hi[inc.axis] = inc.axial_hi;
  }
  return {lo, hi};
}

bool boxes_disjoint(const std::pair<Point, Point> &a, const std::pair<Point, Point> &b, int dim) {
  for (int d = 0; d < dim; ++d)
    if (a.second[d] < b.first[d] || b.second[d] < a.first[d])
      return true;
  return false;
}

bool disjoint(const Inclusion &a, const Inclusion &b, int dim) {
  if (a.kind != b.kind)
    throw GeometryError("inclusions of different kinds cannot be mixed");
  if (a.kind == Inclusion::Kind::Disk2D)
    return std::hypot(a.center[0] - b.center[0], a.center[1] - b.center[1]) > a.radius + b.radius;
  if (a.axis == b.axis) {
    if (a.axial_hi < b.axial_lo || b.axial_hi < a.axial_lo)
      return true;
    return a.radial_distance(b.center) > a.radius + b.radius;
  }
  // Conservative for crossing axes.
  return boxes_disjoint(bounding_box(a), bounding_box(b), dim);
}

} // namespace

void validate_inclusions(const BoxDomain &domain, const std::vector<Inclusion> &inclusions) {
  for (std::size_t i = 0; i < inclusions.size(); ++i) {
    const auto &inc = inclusions[i];
    inc.validate();
    if (inc.dim() != domain.dim)
      throw GeometryError("inclusion " + std::to_string(i) + " does not match the domain dimension");
    const auto [lo, hi] = bounding_box(inc);
    for (int a = 0; a < domain.dim; ++a)
      if (!(lo[a] > domain.lower[a] && hi[a] < domain.upper[a]))
        throw GeometryError("inclusion " + std::to_string(i) + " is not strictly inside the domain");
    for (std::size_t j = 0; j < i; ++j)
      if (!disjoint(inclusions[j], inc, domain.dim))
        throw GeometryError("inclusions " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
  }
}

ModalBasis::ModalBasis(int n) : n_(n) {
  if (n < 0)
    throw ParameterError("Fourier order must be non-negative");
}

double ModalBasis::eval(int k, double theta) const {
  if (k < 0 || k >= size())
    throw ParameterError("mode index " + std::to_string(k) + " out of range for N = " + std::to_string(size()));
  if (k == 0)
    return 1.0;
  const int i = frequency(k);
  return is_sine(k) ? std::sin(i * theta) : std::cos(i * theta);
}

std::string ModalBasis::label(int k) {
  if (k == 0)
    return "0";
  return std::to_string(frequency(k)) + (is_sine(k) ? "s" : "c");
}

double BoundaryQuadrature::total_weight() const {
  double s = 0.0;
  for (const auto &q : points)
    s += q.weight;
  return s;
}

double BoundaryQuadrature::axial_basis(const BoundaryQuadraturePoint &q, int node) const {
  if (q.element < 0)
    return 1.0;
  if (node == q.element)
    return 1.0 - q.axial_ref;
  if (node == q.element + 1)
    return q.axial_ref;
  return 0.0;
}

int BoundaryQuadrature::active_nodes(const BoundaryQuadraturePoint &q, std::array<int, 2> &nodes,
                                     std::array<double, 2> &values) const {
  if (q.element < 0) {
    nodes[0] = 0;
    values[0] = 1.0;
    return 1;
  }
  nodes = {q.element, q.element + 1};
  values = {1.0 - q.axial_ref, q.axial_ref};
  return 2;
}

BoundaryQuadrature build_boundary_quadrature(const Inclusion &inc, const ModalBasis &basis,
                                             const BoundaryQuadratureOptions &options) {
  inc.validate();
  BoundaryQuadrature quad;
  int m = std::max(16, 4 * basis.order() + 4);
  if (options.mesh_size > 0.0) {
    const double arc = 2.0 * std::numbers::pi * inc.radius;
    m = std::max(m, 4 * static_cast<int>(std::ceil(arc / options.mesh_size)));
  }
  if (options.angular_points > 0)
    m = options.angular_points;
  if (m < 4 * basis.order() + 4)
    throw ParameterError("angular quadrature needs at least 4n+4 points");
  m = (m + 3) / 4 * 4;
  quad.angular_points = m;

  const double dtheta = 2.0 * std::numbers::pi / m;
  if (inc.kind == Inclusion::Kind::Disk2D) {
    const double w = inc.radius * dtheta;
    for (int t = 0; t < m; ++t) {
      const double theta = t * dtheta;
      quad.points.push_back({inc.boundary_point(theta), w, theta, 0.0, -1, 0.0});
    }
    return quad;
  }

  if (options.axial_nodes.empty()) {
    const int ne = std::max(1, options.axial_elements);
    for (int e = 0; e <= ne; ++e)
      quad.axial_nodes.push_back(inc.axial_lo + inc.length() * e / ne);
    quad.axial_nodes.back() = inc.axial_hi;
  } else {
    quad.axial_nodes = options.axial_nodes;
    if (quad.axial_nodes.size() < 2 || !std::is_sorted(quad.axial_nodes.begin(), quad.axial_nodes.end()))
      throw GeometryError("axial nodes must be increasing with at least two entries");
  }
  std::vector<double> gx, gw;
  gauss_legendre_unit(2, gx, gw);
  for (std::size_t e = 0; e + 1 < quad.axial_nodes.size(); ++e) {
    const double z0 = quad.axial_nodes[e];
    const double len = quad.axial_nodes[e + 1] - z0;
    for (std::size_t g = 0; g < gx.size(); ++g) {
      const double z = z0 + gx[g] * len;
      const double wz = gw[g] * len;
      for (int t = 0; t < m; ++t) {
        const double theta = t * dtheta;
        quad.points.push_back(
            {inc.boundary_point(theta, z), inc.radius * dtheta * wz, theta, z, static_cast<int>(e), gx[g]});
      }
    }
  }
  return quad;
}

std::vector<double> conforming_axial_nodes(const StructuredMesh &mesh, const Inclusion &cyl) {
  if (cyl.kind != Inclusion::Kind::Cylinder3D)
    throw GeometryError("axial nodes are only defined for cylinders");
  const int a = cyl.axis;
  const double lo = mesh.domain().lower[a];
  const double s = mesh.spacing(a);
  const double t0 = (cyl.axial_lo - lo) / s;
  const double t1 = (cyl.axial_hi - lo) / s;
  const double r0 = std::round(t0), r1 = std::round(t1);
  if (std::abs(t0 - r0) > 1e-9 || std::abs(t1 - r1) > 1e-9)
    throw GeometryError("cylinder ends must lie on bulk mesh planes (conforming multiplier mesh)");
  std::vector<double> nodes;
  for (auto i = static_cast<std::int64_t>(r0); i <= static_cast<std::int64_t>(r1); ++i)
    nodes.push_back(lo + static_cast<double>(i) * s);
  nodes.front() = cyl.axial_lo;
  nodes.back() = cyl.axial_hi;
  return nodes;
}

MultiplierLayout multiplier_layout(const ModalBasis &basis, const BoundaryQuadrature &quad) {
  return {basis.size(), quad.n_axial_nodes()};
}

std::vector<double> sample(const BoundaryQuadrature &quad, const ScalarField &field) {
  std::vector<double> s;
  s.reserve(quad.points.size());
  for (const auto &q : quad.points)
    s.push_back(field(q.x));
  return s;
}

namespace {

// Rows: axial nodes; columns: modes. Entry (a, k) = sum_q w chi_a phi_k f.
Eigen::MatrixXd weighted_moments(const std::vector<double> &samples, const ModalBasis &basis,
                                 const BoundaryQuadrature &quad) {
  if (samples.size() != quad.points.size())
    throw ParameterError("sample count does not match the quadrature");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(quad.n_axial_nodes(), basis.size());
  std::array<int, 2> nodes;
  std::array<double, 2> chi;
  for (std::size_t i = 0; i < quad.points.size(); ++i) {
    const auto &q = quad.points[i];
    const int na = quad.active_nodes(q, nodes, chi);
    for (int k = 0; k < basis.size(); ++k) {
      const double v = q.weight * basis.eval(k, q.theta) * samples[i];
      for (int l = 0; l < na; ++l)
        b(nodes[l], k) += chi[l] * v;
    }
  }
  return b;
}

// Normalized averages: divides the moments by the (axial) mass of Gamma.
Eigen::MatrixXd normalized_averages(const std::vector<double> &samples, const ModalBasis &basis,
                                    const BoundaryQuadrature &quad) {
  Eigen::MatrixXd b = weighted_moments(samples, basis, quad);
  if (quad.axial_nodes.empty())
    return b / quad.total_weight();
  const int nn = quad.n_axial_nodes();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nn, nn);
  std::array<int, 2> nodes;
  std::array<double, 2> chi;
  for (const auto &q : quad.points) {
    const int na = quad.active_nodes(q, nodes, chi);
    for (int l = 0; l < na; ++l)
      for (int r = 0; r < na; ++r)
        mass(nodes[l], nodes[r]) += q.weight * chi[l] * chi[r];
  }
  return mass.llt().solve(b);
}

} // namespace

std::vector<double> weighted_average(const std::vector<double> &samples, const ModalBasis &basis,
                                     const BoundaryQuadrature &quad, int k) {
  if (k < 0 || k >= basis.size())
    throw ParameterError("mode index out of range");
  const Eigen::MatrixXd avg = normalized_averages(samples, basis, quad);
  std::vector<double> out(avg.rows());
  for (Eigen::Index a = 0; a < avg.rows(); ++a)
    out[a] = avg(a, k);
  return out;
}

Vector modal_project(const std::vector<double> &samples, const ModalBasis &basis, const BoundaryQuadrature &quad) {
  const Eigen::MatrixXd avg = normalized_averages(samples, basis, quad);
  const auto layout = multiplier_layout(basis, quad);
  Vector out(layout.size());
  for (int a = 0; a < layout.n_nodes; ++a)
    for (int k = 0; k < layout.n_modes; ++k)
      out[layout.index(a, k)] = avg(a, k) / ModalBasis::constant(k);
  return out;
}

double modal_extend(const Vector &coeffs, const ModalBasis &basis, double theta) {
  if (coeffs.size() != basis.size())
    throw ParameterError("coefficient vector length " + std::to_string(coeffs.size()) + " does not match N = " +
                         std::to_string(basis.size()));
  double v = 0.0;
  for (int k = 0; k < basis.size(); ++k)
    v += coeffs[k] * basis.eval(k, theta);
  return v;
}

double modal_extend(const Vector &coeffs, const ModalBasis &basis, const BoundaryQuadrature &quad,
                    const BoundaryQuadraturePoint &q) {
  const auto layout = multiplier_layout(basis, quad);
  if (coeffs.size() != layout.size())
    throw ParameterError("coefficient vector length does not match the multiplier layout");
  std::array<int, 2> nodes;
  std::array<double, 2> chi;
  const int na = quad.active_nodes(q, nodes, chi);
  double v = 0.0;
  for (int l = 0; l < na; ++l)
    for (int k = 0; k < layout.n_modes; ++k)
      v += chi[l] * coeffs[layout.index(nodes[l], k)] * basis.eval(k, q.theta);
  return v;
}

} // namespace rlm
