#pragma once

#include <array>
#include <cstdint>

namespace rlm {

/// Coordinates are always stored with three components; the third is
/// ignored (and kept at zero) for two dimensional meshes.
using Point = std::array<double, 3>;

struct BoxDomain {
  Point lower{};
  Point upper{};
  int dim = 2;

  /// [-1,1]^dim
  static BoxDomain unit_box(int dim);

  double side(int axis) const { return upper[axis] - lower[axis]; }
  double volume() const;
  /// Throws GeometryError when the box is degenerate or dim is not 2 or 3.
  void validate() const;
  bool contains(const Point &p, double tol = 0.0) const;
};

/// Integer multi-index of a cell, one component per axis. Unused axes are 0.
struct CellIndex {
  std::array<std::int64_t, 3> idx{};
  bool operator==(const CellIndex &) const = default;
};

/// Uniform tensor grid with 2^level cells per side. Vertex and cell maps
/// are lexicographic with the x index running fastest.
class StructuredMesh {
public:
  StructuredMesh(const BoxDomain &domain, int level);

  const BoxDomain &domain() const { return domain_; }
  int dim() const { return domain_.dim; }
  int level() const { return level_; }
  std::int64_t cells_per_side() const { return n_; }
  /// Largest cell edge length.
  double h() const;
  double spacing(int axis) const { return spacing_[axis]; }

  std::int64_t n_cells() const;
  std::int64_t n_vertices() const;

  std::int64_t vertex_id(std::int64_t i, std::int64_t j, std::int64_t k = 0) const {
    return i + (n_ + 1) * (j + (n_ + 1) * k);
  }
  std::array<std::int64_t, 3> vertex_multi_index(std::int64_t id) const;
  Point vertex(std::int64_t id) const;
  bool on_boundary(std::int64_t vertex_id) const;

  std::int64_t cell_id(const CellIndex &c) const {
    return c.idx[0] + n_ * (c.idx[1] + n_ * c.idx[2]);
  }
  CellIndex cell_index(std::int64_t id) const;
  Point cell_lower(const CellIndex &c) const;
  double cell_volume() const;

  /// Vertex ids of a cell in tensor order (x fastest).
  int cell_vertices(const CellIndex &c, std::array<std::int64_t, 8> &out) const;

  /// Cell whose closed extent contains p. Points on shared faces go to the
  /// cell with the smaller multi-index. Throws OutOfDomainError.
  CellIndex locate(const Point &p) const;
  /// Reference coordinates of p within cell c, each in [0,1].
  Point reference_coordinates(const CellIndex &c, const Point &p) const;

private:
  BoxDomain domain_;
  int level_;
  std::int64_t n_;
  Point spacing_{};
};

/// Highest level whose vertex count fits in 32-bit sparse indices.
int max_level(int dim);

StructuredMesh build_box_mesh(const BoxDomain &domain, int level);
CellIndex cell_containing_point(const StructuredMesh &mesh, const Point &p);
StructuredMesh refine_globally(const StructuredMesh &mesh);

} // namespace rlm
