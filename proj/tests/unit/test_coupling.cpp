#include "rlm/coupling.hpp"
#include "rlm/errors.hpp"
#include "rlm/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rlm;

namespace {
const double pi = std::numbers::pi;
FeSpace space2(int level) { return FeSpace(build_box_mesh(BoxDomain::unit_box(2), level)); }
} // namespace

TEST(Coupling, RowSums) {
  auto s = space2(6);
  const double eps = 0.2;
  auto blk = make_inclusion_block(s, Inclusion::disk(0, 0, eps), 3);
  auto c = assemble_coupling(s, blk);
  ASSERT_EQ(c.rows(), 7);
  Vector r = c * Vector::Ones(s.n_dofs());
  EXPECT_NEAR(r[0], 2 * pi * eps, 1e-10);
  for (int k = 1; k < 7; ++k)
    EXPECT_NEAR(r[k], 0.0, 1e-12);
}

TEST(Coupling, LinearFieldMoment) {
  auto s = space2(5);
  const double eps = 0.2;
  auto blk = make_inclusion_block(s, Inclusion::disk(0, 0, eps), 1);
  Vector cx = assemble_coupling(s, blk) * interpolate(s, [](const Point &p) { return p[0]; }).coefficients;
  // independent oracle: fine midpoint rule of x cos(theta) on the circle
  const int m = 20000;
  double oracle = 0;
  for (int i = 0; i < m; ++i) {
    double t = 2 * pi * (i + 0.5) / m;
    oracle += eps * std::cos(t) * std::cos(t) * eps * 2 * pi / m;
  }
  EXPECT_NEAR(cx[1], pi * eps * eps, 1e-12);
  EXPECT_NEAR(cx[1], oracle, 1e-10);
  EXPECT_NEAR(cx[0], 0.0, 1e-12);
  EXPECT_NEAR(cx[2], 0.0, 1e-12);
}

TEST(Coupling, ConstraintRhs) {
  auto s = space2(6);
  const double eps = 0.2;
  auto blk = make_inclusion_block(s, Inclusion::disk(0, 0, eps), 2);

  auto d1 = make_problem(ProblemId::D1).data(eps);
  Vector g1 = assemble_constraint_rhs(d1.g, blk);
  EXPECT_NEAR(g1[0], -std::log(eps) * 2 * pi * eps, 1e-12);
  for (int k = 1; k < 5; ++k)
    EXPECT_NEAR(g1[k], 0.0, 1e-13);

  auto d2 = make_problem(ProblemId::D2).data(eps);
  Vector g2 = assemble_constraint_rhs(d2.g, blk);
  const int m = 20000;
  double oracle = 0;
  for (int i = 0; i < m; ++i) {
    double t = 2 * pi * (i + 0.5) / m;
    oracle += d2.g({eps * std::cos(t), eps * std::sin(t), 0}) * std::cos(t) * eps * 2 * pi / m;
  }
  EXPECT_NEAR(g2[1], eps * pi * eps, 1e-13);
  EXPECT_NEAR(g2[1], oracle, 1e-10);
  for (int k : {0, 2, 3, 4})
    EXPECT_NEAR(g2[k], 0.0, 1e-13);

  Vector g0 = assemble_constraint_rhs([](const Point &) { return 0.0; }, blk);
  EXPECT_EQ(g0.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Coupling, RobinBlock) {
  auto s = space2(5);
  const double eps = 0.2;
  auto blk = make_inclusion_block(s, Inclusion::disk(0, 0, eps), 2);
  EXPECT_EQ(assemble_robin(blk, 0.0).nonZeros(), 0);
  auto m = Eigen::MatrixXd(assemble_robin(blk, 1.0));
  EXPECT_NEAR(m(0, 0), 2 * pi * eps, 1e-13);
  EXPECT_NEAR(m(1, 1), pi * eps, 1e-13);
  EXPECT_NEAR(m(4, 4), pi * eps, 1e-13);
  EXPECT_NEAR((m - Eigen::MatrixXd(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0, 1e-14);
  auto m3 = Eigen::MatrixXd(assemble_robin(blk, 1e-3));
  EXPECT_NEAR(m3(1, 1), 1e-3 * pi * eps, 1e-16);
  EXPECT_THROW(assemble_robin(blk, -1.0), ParameterError);
}

TEST(Coupling, CylinderBlock) {
  FeSpace s(build_box_mesh(BoxDomain::unit_box(3), 3));
  auto blk = make_inclusion_block(s, Inclusion::cylinder(2, {0, 0, 0}, -0.5, 0.25, 0.2), 1);
  EXPECT_EQ(blk.layout.n_nodes, 4);
  EXPECT_EQ(blk.layout.size(), 12);
  auto c = assemble_coupling(s, blk);
  Vector r = c * Vector::Ones(s.n_dofs());
  double mode0 = 0;
  for (int a = 0; a < blk.layout.n_nodes; ++a) {
    mode0 += r[blk.layout.index(a, 0)];
    EXPECT_NEAR(r[blk.layout.index(a, 1)], 0.0, 1e-12);
  }
  EXPECT_NEAR(mode0, 2 * pi * 0.2 * 0.75, 1e-10);
}

TEST(Coupling, SaddleSystemStructure) {
  auto s = space2(5);
  auto p = make_problem(ProblemId::TwoInclusions);
  auto bulk = BulkOperator::stiffness(s);
  for (double kappa : {0.0, 0.5}) {
    auto data = p.data(0.1);
    data.kappa = kappa;
    auto red = assemble_reduced_system(bulk, p.inclusions(0.1), 2, data);
    const auto &sys = red.system;
    EXPECT_EQ(sys.n_multipliers(), 10);
    EXPECT_EQ(sys.size(), s.n_dofs() + 10);
    ASSERT_EQ(sys.blocks.size(), 2u);
    EXPECT_EQ(sys.blocks[1].offset, 5);
    auto k = sys.matrix();
    EXPECT_EQ((SparseMatrix(k.transpose()) - k).norm(), 0.0);
    // eliminated outer dofs carry no coupling
    const auto &fixed = bulk->fixed();
    for (int j = 0; j < sys.coupling.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(sys.coupling, j); it; ++it)
        EXPECT_FALSE(fixed[it.col()]);
  }
}

TEST(Coupling, NoInclusionSystemIsPoisson) {
  auto s = space2(4);
  auto bulk = BulkOperator::stiffness(s);
  auto bc = DirichletConstraint::on_box_boundary(s, [](const Point &p) { return p[0] * p[1]; });
  Vector load = assemble_load(s, [](const Point &) { return 1.0; });
  auto sys = build_saddle_system(bulk, bc, load, {}, {}, {});
  EXPECT_EQ(sys.n_multipliers(), 0);
  SparseMatrix a = assemble_stiffness(s);
  Vector rhs = load;
  constrain_dirichlet_boundary(a, rhs, bc);
  EXPECT_EQ((sys.matrix() - a).norm(), 0.0);
  EXPECT_EQ((sys.rhs() - rhs).norm(), 0.0);
}

TEST(Coupling, MismatchErrors) {
  auto s = space2(4);
  auto bulk = BulkOperator::stiffness(s);
  auto bc = DirichletConstraint::on_box_boundary(s, [](const Point &) { return 0.0; });
  Vector load = Vector::Zero(s.n_dofs());
  EXPECT_THROW(build_saddle_system(bulk, bc, Vector::Zero(3), {}, {}, {}), ParameterError);
  auto blk = make_inclusion_block(s, Inclusion::disk(0, 0, 0.2), 1);
  auto c = assemble_coupling(s, blk);
  EXPECT_THROW(build_saddle_system(bulk, bc, load, {c}, {SparseMatrix(3, 3)}, {Vector::Zero(2)}), ParameterError);
  EXPECT_THROW(build_saddle_system(bulk, bc, load, {c}, {}, {Vector::Zero(3)}), ParameterError);
}
