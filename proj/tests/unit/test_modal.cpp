#include "rlm/errors.hpp"
#include "rlm/modal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rlm;

namespace {
const double pi = std::numbers::pi;

std::vector<double> sample_theta(const BoundaryQuadrature &quad, const std::function<double(double)> &f) {
  std::vector<double> out;
  for (const auto &q : quad.points)
    out.push_back(f(q.theta));
  return out;
}

Vector random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Vector v(n);
  for (auto &x : v)
    x = nd(rng);
  return v;
}

std::vector<double> extension_samples(const Vector &c, const ModalBasis &b, const BoundaryQuadrature &quad) {
  std::vector<double> out;
  for (const auto &q : quad.points)
    out.push_back(modal_extend(c, b, quad, q));
  return out;
}

BoundaryQuadrature cylinder_quad(const ModalBasis &b) {
  BoundaryQuadratureOptions o;
  o.axial_elements = 4;
  return build_boundary_quadrature(Inclusion::cylinder(2, {0.1, -0.2, 0}, -0.25, 0.25, 0.2), b, o);
}
} // namespace

TEST(Modal, ModeValues) {
  ModalBasis b(2);
  EXPECT_EQ(b.size(), 5);
  for (double t : {0.0, 1.0, 4.0})
    EXPECT_EQ(b.eval(0, t), 1.0);
  EXPECT_NEAR(b.eval(1, pi / 2), 0.0, 1e-16);
  EXPECT_NEAR(b.eval(4, pi / 4), 1.0, 1e-15);
  EXPECT_EQ(ModalBasis::frequency(3), 2);
  EXPECT_FALSE(ModalBasis::is_sine(3));
  EXPECT_TRUE(ModalBasis::is_sine(4));
  EXPECT_EQ(ModalBasis::constant(0), 1.0);
  EXPECT_EQ(ModalBasis::constant(3), 0.5);
  EXPECT_THROW(b.eval(5, 0.0), ParameterError);
  EXPECT_THROW(ModalBasis(-1), ParameterError);
}

TEST(Modal, DiskQuadrature) {
  ModalBasis b(0);
  auto q = build_boundary_quadrature(Inclusion::disk(0, 0, 0.2), b);
  EXPECT_EQ(q.points.size(), 16u);
  EXPECT_NEAR(q.total_weight(), 2 * pi * 0.2, 1e-14);
  double cs = 0;
  for (const auto &p : q.points)
    cs += p.weight * std::cos(p.theta) * std::sin(p.theta);
  EXPECT_NEAR(cs, 0.0, 1e-14);
  auto q3 = build_boundary_quadrature(Inclusion::disk(0, 0, 0.2), ModalBasis(5));
  EXPECT_EQ(q3.points.size(), 24u);
  for (const auto &p : q.points)
    EXPECT_NEAR(std::hypot(p.x[0], p.x[1]), 0.2, 1e-15);
}

TEST(Modal, CylinderQuadrature) {
  ModalBasis b(1);
  auto q = cylinder_quad(b);
  EXPECT_NEAR(q.total_weight(), 2 * pi * 0.2 * 0.5, 1e-14);
  EXPECT_EQ(q.n_axial_nodes(), 5);
  auto lay = multiplier_layout(b, q);
  EXPECT_EQ(lay.size(), 15);
  EXPECT_EQ(lay.index(2, 1), 7);
}

TEST(Modal, WeightedAverages) {
  ModalBasis b(2);
  const double eps = 0.2;
  auto quad = build_boundary_quadrature(Inclusion::disk(0, 0, eps), b);
  EXPECT_NEAR(weighted_average(sample_theta(quad, [](double) { return 3.5; }), b, quad, 0)[0], 3.5, 1e-14);
  EXPECT_NEAR(weighted_average(sample_theta(quad, [](double t) { return std::cos(t); }), b, quad, 1)[0], 0.5,
              1e-14);

  // D2 datum on Gamma against an independent fine midpoint rule
  auto g = [&](const Point &p) { return p[0] * eps * eps / (p[0] * p[0] + p[1] * p[1]); };
  double avg = weighted_average(sample(quad, g), b, quad, 1)[0];
  const int m = 20000;
  double oracle = 0;
  for (int i = 0; i < m; ++i) {
    double t = 2 * pi * (i + 0.5) / m;
    oracle += g({eps * std::cos(t), eps * std::sin(t), 0}) * std::cos(t) / m;
  }
  EXPECT_NEAR(avg, eps / 2, 1e-14);
  EXPECT_NEAR(avg, oracle, 1e-10);
}

TEST(Modal, ProjectionExamples) {
  ModalBasis b(3);
  auto quad = build_boundary_quadrature(Inclusion::disk(0.1, 0, 0.2), b);
  Vector p5 = modal_project(sample_theta(quad, [](double) { return 5.0; }), b, quad);
  Vector e5 = Vector::Zero(7);
  e5[0] = 5;
  EXPECT_LT((p5 - e5).cwiseAbs().maxCoeff(), 1e-14);
  Vector pc = modal_project(sample_theta(quad, [](double t) { return std::cos(t); }), b, quad);
  Vector e1 = Vector::Zero(7);
  e1[1] = 1;
  EXPECT_LT((pc - e1).cwiseAbs().maxCoeff(), 1e-14);
  Vector e0 = Vector::Zero(7);
  e0[0] = 1;
  for (double t : {0.0, 1.3, 5.0})
    EXPECT_NEAR(modal_extend(e0, b, t), 1.0, 1e-15);
  EXPECT_THROW(modal_extend(Vector::Zero(3), b, 0.0), ParameterError);
}

TEST(Modal, DiscreteOrthogonality) {
  for (int n : {0, 1, 4, 7}) {
    ModalBasis b(n);
    for (const auto &quad : {build_boundary_quadrature(Inclusion::disk(0, 0, 0.3), b),
                             build_boundary_quadrature(Inclusion::disk(0, 0, 0.3), b, {0.01, 0, {}, 1})}) {
      for (int k = 0; k < b.size(); ++k) {
        auto s = sample_theta(quad, [&](double t) { return b.eval(k, t); });
        for (int l = 0; l < b.size(); ++l) {
          double expect = k == l ? ModalBasis::constant(k) : 0.0;
          EXPECT_NEAR(weighted_average(s, b, quad, l)[0], expect, 1e-13) << n << " " << k << " " << l;
        }
      }
    }
  }
}

TEST(Modal, LeftInverseAndIdempotence) {
  for (int n : {0, 2, 5}) {
    ModalBasis b(n);
    auto disk = build_boundary_quadrature(Inclusion::disk(0, 0, 0.2), b);
    auto cyl = cylinder_quad(b);
    for (const auto *quad : {&disk, &cyl}) {
      auto lay = multiplier_layout(b, *quad);
      for (unsigned seed = 0; seed < 5; ++seed) {
        Vector c = random_vector(lay.size(), seed);
        Vector back = modal_project(extension_samples(c, b, *quad), b, *quad);
        EXPECT_LT((back - c).cwiseAbs().maxCoeff(), 1e-13);

        // R^T P twice on arbitrary samples
        std::mt19937 rng(seed + 100);
        std::normal_distribution<double> nd;
        std::vector<double> q(quad->points.size());
        for (auto &x : q)
          x = nd(rng);
        auto once = extension_samples(modal_project(q, b, *quad), b, *quad);
        auto twice = extension_samples(modal_project(once, b, *quad), b, *quad);
        for (std::size_t i = 0; i < q.size(); ++i)
          EXPECT_NEAR(once[i], twice[i], 1e-12);
      }
    }
  }
}

TEST(Modal, TruncationAnnihilation) {
  for (int n : {0, 1, 3}) {
    ModalBasis b(n);
    auto quad = build_boundary_quadrature(Inclusion::disk(0, 0, 0.2), b);
    for (int m = n + 1; m <= n + 4; ++m) {
      Vector pc = modal_project(sample_theta(quad, [&](double t) { return std::cos(m * t); }), b, quad);
      Vector ps = modal_project(sample_theta(quad, [&](double t) { return std::sin(m * t); }), b, quad);
      EXPECT_LT(pc.cwiseAbs().maxCoeff(), 1e-13);
      EXPECT_LT(ps.cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

TEST(Modal, CylinderConstantProfile) {
  ModalBasis b(1);
  auto quad = cylinder_quad(b);
  auto prof = weighted_average(std::vector<double>(quad.points.size(), 2.0), b, quad, 0);
  ASSERT_EQ(prof.size(), 5u);
  for (double v : prof)
    EXPECT_NEAR(v, 2.0, 1e-13);
}

TEST(Modal, ConformingAxialNodes) {
  auto mesh = build_box_mesh(BoxDomain::unit_box(3), 3);
  auto nodes = conforming_axial_nodes(mesh, Inclusion::cylinder(2, {0, 0, 0}, -0.5, 0.25, 0.2));
  ASSERT_EQ(nodes.size(), 4u);
  EXPECT_DOUBLE_EQ(nodes.front(), -0.5);
  EXPECT_DOUBLE_EQ(nodes.back(), 0.25);
  EXPECT_THROW(conforming_axial_nodes(mesh, Inclusion::cylinder(2, {0, 0, 0}, -0.4, 0.25, 0.2)), GeometryError);
}

TEST(Modal, InclusionGeometry) {
  auto d = Inclusion::disk(0.2, -0.1, 0.1);
  EXPECT_NEAR(d.boundary_measure(), 2 * pi * 0.1, 1e-15);
  auto p = d.boundary_point(1.0);
  EXPECT_NEAR(d.radial_distance(p), 0.1, 1e-15);
  EXPECT_NEAR(d.angle_of(p), 1.0, 1e-14);
  auto c = Inclusion::cylinder(0, {0, 0.1, 0.2}, -0.3, 0.3, 0.1);
  auto q = c.boundary_point(2.0, 0.1);
  EXPECT_NEAR(q[0], 0.1, 1e-15);
  EXPECT_NEAR(c.radial_distance(q), 0.1, 1e-15);
  EXPECT_NEAR(c.angle_of(q), 2.0, 1e-14);

  auto box = BoxDomain::unit_box(2);
  EXPECT_NO_THROW(validate_inclusions(box, {Inclusion::disk(-0.4, 0, 0.2), Inclusion::disk(0.4, 0, 0.2)}));
  EXPECT_THROW(validate_inclusions(box, {Inclusion::disk(-0.1, 0, 0.2), Inclusion::disk(0.1, 0, 0.2)}),
               GeometryError);
  EXPECT_THROW(validate_inclusions(box, {Inclusion::disk(0.9, 0, 0.2)}), GeometryError);
  EXPECT_THROW(validate_inclusions(box, {Inclusion::disk(0, 0, -0.2)}), GeometryError);
  EXPECT_THROW(validate_inclusions(BoxDomain::unit_box(3), {Inclusion::cylinder(2, {}, -0.5, 1.0, 0.2)}),
               GeometryError);
}
