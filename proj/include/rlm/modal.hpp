#pragma once

#include "rlm/fem.hpp"
#include "rlm/mesh.hpp"

#include <string>
#include <vector>

namespace rlm {

/// A disk in 2D or a coordinate-axis aligned cylinder segment in 3D. Only
/// the lateral surface of a cylinder belongs to Gamma.
struct Inclusion {
  enum class Kind { Disk2D, Cylinder3D };

  Kind kind = Kind::Disk2D;
  /// Disk center, or any point on the cylinder axis (the axial component is
  /// ignored).
  Point center{};
  int axis = 2;
  double axial_lo = 0.0;
  double axial_hi = 0.0;
  double radius = 0.0;

  static Inclusion disk(double cx, double cy, double radius);
  static Inclusion cylinder(int axis, const Point &center, double lo, double hi, double radius);

  int dim() const { return kind == Kind::Disk2D ? 2 : 3; }
  double length() const { return kind == Kind::Disk2D ? 0.0 : axial_hi - axial_lo; }
  /// |Gamma|: circumference, or lateral area of the cylinder.
  double boundary_measure() const;
  /// Transverse axes (u, v) such that theta is measured from u toward v.
  std::array<int, 2> transverse_axes() const;
  Point boundary_point(double theta, double axial = 0.0) const;
  /// Polar angle of p around the centerline.
  double angle_of(const Point &p) const;
  /// Distance of p to the centerline (the point or the infinite axis line).
  double radial_distance(const Point &p) const;
  void validate() const;
};

/// Throws GeometryError unless every inclusion is well formed, its closure
/// lies strictly inside the domain, and the inclusions are pairwise disjoint.
void validate_inclusions(const BoxDomain &domain, const std::vector<Inclusion> &inclusions);

/// Fourier weight functions 1, cos(i t), sin(i t) for i = 1..n, ordered
/// [phi_0, phi_1^c, phi_1^s, ..., phi_n^c, phi_n^s].
class ModalBasis {
public:
  explicit ModalBasis(int n);

  int order() const { return n_; }
  int size() const { return 2 * n_ + 1; }
  /// Fourier order i of mode index k.
  static int frequency(int k) { return (k + 1) / 2; }
  static bool is_sine(int k) { return k > 0 && k % 2 == 0; }
  /// Orthogonality constant of the normalized angular average: 1 for the
  /// constant mode, 1/2 otherwise.
  static double constant(int k) { return k == 0 ? 1.0 : 0.5; }
  double eval(int k, double theta) const;
  static std::string label(int k);

private:
  int n_;
};

/// Multiplier dofs of one inclusion, node-major: index = node * N + mode.
/// A disk has a single "node" (its center).
struct MultiplierLayout {
  int n_modes = 1;
  int n_nodes = 1;
  int size() const { return n_modes * n_nodes; }
  int index(int node, int mode) const { return node * n_modes + mode; }
};

struct BoundaryQuadraturePoint {
  Point x{};
  double weight = 0.0;
  double theta = 0.0;
  /// Axial coordinate, axial element and reference coordinate within that
  /// element; element is -1 for disks.
  double axial = 0.0;
  int element = -1;
  double axial_ref = 0.0;
};

struct BoundaryQuadrature {
  std::vector<BoundaryQuadraturePoint> points;
  int angular_points = 0;
  std::vector<double> axial_nodes;

  double total_weight() const;
  int n_axial_nodes() const { return axial_nodes.empty() ? 1 : static_cast<int>(axial_nodes.size()); }
  /// P1 axial basis of node `node` at a quadrature point (1 for disks).
  double axial_basis(const BoundaryQuadraturePoint &q, int node) const;
  /// Axial nodes whose basis is non-zero at q (1 or 2 entries, or one 0 for disks).
  int active_nodes(const BoundaryQuadraturePoint &q, std::array<int, 2> &nodes, std::array<double, 2> &values) const;
};

struct BoundaryQuadratureOptions {
  /// Bulk mesh size; when positive the angular count also resolves the mesh
  /// (4 points per h of arc length).
  double mesh_size = 0.0;
  /// Overrides the automatic angular count when positive.
  int angular_points = 0;
  /// Axial multiplier nodes for cylinders; uniform `axial_elements` split
  /// of the segment when empty.
  std::vector<double> axial_nodes;
  int axial_elements = 1;
};

/// Equally spaced trapezoid in theta with m = max(16, 4n+4) points (more
/// when resolving a mesh); 2-point Gauss per axial element for cylinders.
BoundaryQuadrature build_boundary_quadrature(const Inclusion &inc, const ModalBasis &basis,
                                             const BoundaryQuadratureOptions &options = {});

/// Axial multiplier nodes on the bulk mesh planes normal to the cylinder
/// axis. Throws GeometryError when the cylinder ends are not on mesh planes.
std::vector<double> conforming_axial_nodes(const StructuredMesh &mesh, const Inclusion &cyl);

MultiplierLayout multiplier_layout(const ModalBasis &basis, const BoundaryQuadrature &quad);

/// Samples of a field at the quadrature points.
std::vector<double> sample(const BoundaryQuadrature &quad, const ScalarField &field);

/// Normalized weighted angular average of q against mode k. One value for
/// a disk; for a cylinder, the axial L2 projection of the profile onto the
/// axial nodes.
std::vector<double> weighted_average(const std::vector<double> &samples, const ModalBasis &basis,
                                     const BoundaryQuadrature &quad, int k);

/// The projection P: q -> { c_k^-1 avg_k q }, laid out per MultiplierLayout.
Vector modal_project(const std::vector<double> &samples, const ModalBasis &basis, const BoundaryQuadrature &quad);

/// The extension R^T: sum_k coeffs[k] phi_k(theta), for a single cross-section.
double modal_extend(const Vector &coeffs, const ModalBasis &basis, double theta);

/// R^T evaluated at a quadrature point, including the axial basis.
double modal_extend(const Vector &coeffs, const ModalBasis &basis, const BoundaryQuadrature &quad,
                    const BoundaryQuadraturePoint &q);

/// Symbols of the stability analysis. Documentation only; nothing computes
/// them (the inf-sup constant is estimated numerically by estimate_infsup).
struct AnalysisConstants {
  static constexpr const char *alpha = "coercivity constant of the bulk form on H^1_0";
  static constexpr const char *beta_B = "inf-sup constant of the full trace operator";
  static constexpr const char *beta_R = "inf-sup constant of the reduced trace operator";
  static constexpr const char *norm_A = "continuity constant of the bulk form";
  static constexpr const char *norm_B = "continuity constant of the trace operator";
  static constexpr const char *delta = "radius of the enlarged cylinder free of sources";
  static constexpr const char *J_m = "lower bound of the Jacobian of the reference map";
  static constexpr const char *J_M = "upper bound of the Jacobian of the reference map";
  static constexpr const char *D_m = "lower bound of the cross-section measure";
  static constexpr const char *D_M = "upper bound of the cross-section measure";
};

} // namespace rlm
