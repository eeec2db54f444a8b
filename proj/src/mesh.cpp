#include "rlm/mesh.hpp"

#include "rlm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rlm {

BoxDomain BoxDomain::unit_box(int dim) {
  BoxDomain d;
  d.dim = dim;
  for (int a = 0; a < dim; ++a) {
    d.lower[a] = -1.0;
    d.upper[a] = 1.0;
  }
  return d;
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a)
    v *= side(a);
  return v;
}

void BoxDomain::validate() const {
  if (dim != 2 && dim != 3)
    throw GeometryError("domain dimension must be 2 or 3, got " + std::to_string(dim));
  for (int a = 0; a < dim; ++a)
    if (!(upper[a] > lower[a]))
      throw GeometryError("domain upper corner must dominate lower corner on axis " +
                          std::to_string(a));
}

bool BoxDomain::contains(const Point &p, double tol) const {
  for (int a = 0; a < dim; ++a)
    if (p[a] < lower[a] - tol || p[a] > upper[a] + tol)
      return false;
  return true;
}

int max_level(int dim) {
  // (2^L + 1)^dim must stay below 2^31 - 1.
  int level = 0;
  const double limit = static_cast<double>(std::numeric_limits<int>::max());
  while (std::pow(std::ldexp(1.0, level + 1) + 1.0, dim) < limit)
    ++level;
  return level;
}

StructuredMesh::StructuredMesh(const BoxDomain &domain, int level) : domain_(domain), level_(level) {
  domain_.validate();
  if (level < 0)
    throw CapacityError("mesh level must be non-negative");
  if (level > max_level(domain_.dim))
    throw CapacityError("mesh level " + std::to_string(level) + " exceeds the addressable index space for dim " +
                        std::to_string(domain_.dim) + " (max " + std::to_string(max_level(domain_.dim)) + ")");
  n_ = std::int64_t{1} << level;
  for (int a = 0; a < domain_.dim; ++a)
    spacing_[a] = domain_.side(a) / static_cast<double>(n_);
}

double StructuredMesh::h() const {
  double h = 0.0;
  for (int a = 0; a < dim(); ++a)
    h = std::max(h, spacing_[a]);
  return h;
}

std::int64_t StructuredMesh::n_cells() const {
  std::int64_t c = 1;
  for (int a = 0; a < dim(); ++a)
    c *= n_;
  return c;
}

std::int64_t StructuredMesh::n_vertices() const {
  std::int64_t c = 1;
  for (int a = 0; a < dim(); ++a)
    c *= n_ + 1;
  return c;
}

std::array<std::int64_t, 3> StructuredMesh::vertex_multi_index(std::int64_t id) const {
  std::array<std::int64_t, 3> m{};
  for (int a = 0; a < dim(); ++a) {
    m[a] = id % (n_ + 1);
    id /= (n_ + 1);
  }
  return m;
}

Point StructuredMesh::vertex(std::int64_t id) const {
  const auto m = vertex_multi_index(id);
  Point p{};
  for (int a = 0; a < dim(); ++a)
    p[a] = m[a] == n_ ? domain_.upper[a] : domain_.lower[a] + static_cast<double>(m[a]) * spacing_[a];
  return p;
}

bool StructuredMesh::on_boundary(std::int64_t vertex_id) const {
  const auto m = vertex_multi_index(vertex_id);
  for (int a = 0; a < dim(); ++a)
    if (m[a] == 0 || m[a] == n_)
      return true;
  return false;
}

CellIndex StructuredMesh::cell_index(std::int64_t id) const {
  CellIndex c;
  for (int a = 0; a < dim(); ++a) {
    c.idx[a] = id % n_;
    id /= n_;
  }
  return c;
}

Point StructuredMesh::cell_lower(const CellIndex &c) const {
  Point p{};
  for (int a = 0; a < dim(); ++a)
    p[a] = domain_.lower[a] + static_cast<double>(c.idx[a]) * spacing_[a];
  return p;
}

double StructuredMesh::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a)
    v *= spacing_[a];
  return v;
}

int StructuredMesh::cell_vertices(const CellIndex &c, std::array<std::int64_t, 8> &out) const {
  const int nloc = 1 << dim();
  for (int l = 0; l < nloc; ++l) {
    const std::int64_t i = c.idx[0] + (l & 1);
    const std::int64_t j = c.idx[1] + ((l >> 1) & 1);
    const std::int64_t k = dim() == 3 ? c.idx[2] + ((l >> 2) & 1) : 0;
    out[l] = vertex_id(i, j, k);
  }
  return nloc;
}

CellIndex StructuredMesh::locate(const Point &p) const {
  CellIndex c;
  for (int a = 0; a < dim(); ++a) {
    const double tol = 1e-12 * domain_.side(a);
    if (!(p[a] >= domain_.lower[a] - tol && p[a] <= domain_.upper[a] + tol))
      throw OutOfDomainError("point outside the mesh domain on axis " + std::to_string(a));
    const double t = (p[a] - domain_.lower[a]) / spacing_[a];
    // ceil(t) - 1 sends points on a shared face to the smaller index.
    const auto i = static_cast<std::int64_t>(std::ceil(t)) - 1;
    c.idx[a] = std::clamp<std::int64_t>(i, 0, n_ - 1);
  }
  return c;
}

Point StructuredMesh::reference_coordinates(const CellIndex &c, const Point &p) const {
  Point xi{};
  for (int a = 0; a < dim(); ++a) {
    const double t = (p[a] - domain_.lower[a]) / spacing_[a] - static_cast<double>(c.idx[a]);
    xi[a] = std::clamp(t, 0.0, 1.0);
  }
  return xi;
}

StructuredMesh build_box_mesh(const BoxDomain &domain, int level) { return StructuredMesh(domain, level); }

CellIndex cell_containing_point(const StructuredMesh &mesh, const Point &p) { return mesh.locate(p); }

StructuredMesh refine_globally(const StructuredMesh &mesh) {
  return StructuredMesh(mesh.domain(), mesh.level() + 1);
}

} // namespace rlm
