#pragma once

#include "rlm/coupling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rlm {

enum class ProblemId { D1, D2, D3, TwoInclusions, ThreeCylinders, Custom };

std::string to_string(ProblemId id);
/// Accepts "D1", "D2", "D3", "TWO_INC", "THREE_CYL"; throws ConfigError.
ProblemId parse_problem_id(const std::string &name);

/// A test problem: geometry as a function of the radius, boundary data and,
/// for D1-D3, the piecewise exact solution (interior formula for rho < eps,
/// exterior formula otherwise).
struct ManufacturedProblem {
  ProblemId id = ProblemId::D1;
  std::string name;
  BoxDomain domain;
  std::function<std::vector<Inclusion>(double eps)> inclusions;
  std::function<ProblemData(double eps)> data;
  std::function<ExactField(double eps)> exact;
  /// Radii must lie in (0, max_epsilon).
  double max_epsilon = 1.0;

  bool has_exact() const { return static_cast<bool>(exact); }
  int dim() const { return domain.dim; }
};

ManufacturedProblem make_problem(ProblemId id);

/// Problem with user-supplied geometry and constant data. With
/// `override_radius` the epsilon of a case replaces every radius; otherwise
/// the configured radii are kept.
ManufacturedProblem make_custom_problem(const BoxDomain &domain, std::vector<Inclusion> inclusions, double g,
                                        double boundary, double f, bool override_radius = true);

struct ExactValue {
  double value = 0.0;
  Point gradient{};
};

/// Throws UnsupportedError for problems without an exact solution.
ExactValue exact_eval(const ManufacturedProblem &problem, double eps, const Point &p);

} // namespace rlm
