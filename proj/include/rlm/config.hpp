#pragma once

#include "rlm/experiments.hpp"

#include <string>

namespace rlm {

/// Validated run configuration. See README for the JSON schema.
struct RunConfig {
  /// Preset id, or ProblemId::Custom with the fields below filled in.
  ProblemId problem = ProblemId::D1;
  BoxDomain custom_domain;
  std::vector<Inclusion> custom_inclusions;
  double custom_g = 1.0;
  double custom_boundary = 0.0;
  double custom_f = 0.0;

  std::vector<int> levels;
  /// Empty only for custom problems (configured radii are used).
  std::vector<double> epsilons;
  std::vector<int> orders;
  std::vector<double> kappas{0.0};
  Method method = Method::Reduced;

  SolverOptions solver;
  int full_order_segments = 64;
  std::string output_dir = "./out";
  int workers = 1;
  /// When set, run-time dependent columns (solve_seconds) stay empty so
  /// repeated runs are byte identical.
  bool deterministic = true;
  bool export_vtk = false;
};

/// Parses and validates a JSON document. Throws ConfigError naming the key
/// path, or GeometryError for invalid custom inclusions.
RunConfig parse_config(const std::string &text);
/// Canonical JSON form; parse_config(to_json(c)) reproduces c.
std::string to_json(const RunConfig &config);

ManufacturedProblem make_problem(const RunConfig &config);
SweepSpec make_sweep_spec(const RunConfig &config);
RunOptions make_run_options(const RunConfig &config);

} // namespace rlm
