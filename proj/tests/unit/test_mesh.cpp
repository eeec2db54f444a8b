#include "rlm/errors.hpp"
#include "rlm/mesh.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rlm;

TEST(Mesh, BaseLevelIsSingleCell) {
  auto m = build_box_mesh(BoxDomain::unit_box(2), 0);
  EXPECT_EQ(m.n_cells(), 1);
  EXPECT_EQ(m.n_vertices(), 4);
  EXPECT_DOUBLE_EQ(m.h(), 2.0);
}

TEST(Mesh, VertexCountsOfFineGrids) {
  EXPECT_EQ(build_box_mesh(BoxDomain::unit_box(2), 8).n_vertices(), 66049);
  EXPECT_EQ(build_box_mesh(BoxDomain::unit_box(2), 10).n_vertices(), 1050625);
}

TEST(Mesh, LocateFirstCell) {
  auto m = build_box_mesh(BoxDomain::unit_box(2), 1);
  EXPECT_EQ(cell_containing_point(m, {-0.5, -0.5, 0}), (CellIndex{{0, 0, 0}}));
  EXPECT_EQ(cell_containing_point(m, {-1, -1, 0}), (CellIndex{{0, 0, 0}}));
  // shared cross goes to the smaller index
  EXPECT_EQ(cell_containing_point(m, {0, 0, 0}), (CellIndex{{0, 0, 0}}));
  EXPECT_EQ(cell_containing_point(m, {1, 1, 0}), (CellIndex{{1, 1, 0}}));
}

TEST(Mesh, LocateOutsideThrows) {
  auto m = build_box_mesh(BoxDomain::unit_box(2), 2);
  EXPECT_THROW(cell_containing_point(m, {1.01, 0, 0}), OutOfDomainError);
  EXPECT_THROW(cell_containing_point(m, {0, -1.5, 0}), OutOfDomainError);
}

TEST(Mesh, LocatedCellContainsPoint) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int dim : {2, 3}) {
    auto m = build_box_mesh(BoxDomain::unit_box(dim), 3);
    for (int t = 0; t < 200; ++t) {
      Point p{u(rng), u(rng), dim == 3 ? u(rng) : 0.0};
      auto c = m.locate(p);
      auto lo = m.cell_lower(c);
      for (int a = 0; a < dim; ++a) {
        EXPECT_LE(lo[a], p[a]);
        EXPECT_GE(lo[a] + m.spacing(a), p[a]);
      }
      auto xi = m.reference_coordinates(c, p);
      for (int a = 0; a < dim; ++a) {
        EXPECT_GE(xi[a], 0.0);
        EXPECT_LE(xi[a], 1.0);
      }
    }
  }
}

TEST(Mesh, Refinement) {
  auto m3 = build_box_mesh(BoxDomain::unit_box(2), 3);
  auto m4 = refine_globally(m3);
  EXPECT_EQ(m4.level(), 4);
  EXPECT_DOUBLE_EQ(m3.h(), 0.25);
  EXPECT_DOUBLE_EQ(m4.h(), 0.125);
  EXPECT_EQ(m4.n_cells(), 4 * m3.n_cells());
  auto c3 = build_box_mesh(BoxDomain::unit_box(3), 2);
  EXPECT_EQ(refine_globally(c3).n_cells(), 8 * c3.n_cells());

  // coarse vertices survive
  for (std::int64_t v = 0; v < m3.n_vertices(); ++v) {
    auto mi = m3.vertex_multi_index(v);
    auto p = m3.vertex(v);
    auto q = m4.vertex(m4.vertex_id(2 * mi[0], 2 * mi[1]));
    EXPECT_EQ(p, q);
  }
}

TEST(Mesh, CellVolumesSumToDomain) {
  for (int dim : {2, 3})
    for (int level : {0, 2, 4}) {
      BoxDomain d{{-1, -0.5, 0}, {2, 1, 0.25}, dim};
      if (dim == 2)
        d.upper[2] = d.lower[2] = 0;
      auto m = build_box_mesh(d, level);
      EXPECT_NEAR(m.cell_volume() * m.n_cells(), d.volume(), 1e-14 * d.volume());
    }
}

TEST(Mesh, BoundaryFlags) {
  auto m = build_box_mesh(BoxDomain::unit_box(2), 2);
  std::int64_t nb = 0;
  for (std::int64_t v = 0; v < m.n_vertices(); ++v)
    nb += m.on_boundary(v);
  EXPECT_EQ(nb, 16);
  EXPECT_FALSE(m.on_boundary(m.vertex_id(2, 2)));
}

TEST(Mesh, InvalidInputs) {
  BoxDomain flat{{0, 0, 0}, {1, 0, 0}, 2};
  EXPECT_THROW(build_box_mesh(flat, 2), GeometryError);
  BoxDomain bad_dim = BoxDomain::unit_box(2);
  bad_dim.dim = 4;
  EXPECT_THROW(build_box_mesh(bad_dim, 2), GeometryError);
  EXPECT_THROW(build_box_mesh(BoxDomain::unit_box(2), -1), CapacityError);
  EXPECT_THROW(build_box_mesh(BoxDomain::unit_box(3), max_level(3) + 1), CapacityError);
}
