#pragma once

#include "rlm/full_order.hpp"
#include "rlm/problems.hpp"

#include <map>
#include <optional>

namespace rlm {

enum class Method { Reduced, Full, Both };
std::string to_string(Method m);
Method parse_method(const std::string &s);

/// Bulk operators shared between cases on the same mesh. Thread safe.
class BulkCache {
public:
  std::shared_ptr<const BulkOperator> get(const BoxDomain &domain, int level);
  void clear();

private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, std::array<double, 6>>, std::shared_ptr<const BulkOperator>> cache_;
};

struct RunOptions {
  SolverOptions solver;
  int full_order_segments = 64;
};

/// One CSV row. Absent optionals are written as empty fields.
struct ErrorRow {
  std::string problem;
  std::string method;
  int level = 0;
  double h = 0.0;
  double epsilon = 0.0;
  int n = 0;
  int N = 1;
  double kappa = 0.0;
  std::int64_t dofs_bulk = 0;
  std::int64_t dofs_lambda = 0;
  std::optional<double> err_l2, err_h1, constraint_res, gap_l2, gap_h1, lambda0, max_u, solve_seconds;
  /// Non-empty when the case failed; the numeric columns are then empty.
  std::string failure;
};

struct CaseSpec {
  int level = 6;
  double epsilon = 0.2;
  int n = 0;
  double kappa = 0.0;
  Method method = Method::Reduced;
};

struct CaseOutcome {
  std::vector<ErrorRow> rows;
  /// Bulk solution of the first row's method.
  std::optional<FeFunction> field;
  /// Multiplier coefficients of the first row's method.
  Vector lambda;
};

/// Normalized modal moments avg_k(g - u_h) on Gamma for modes k < 2 n_max + 1.
/// For cylinders each entry is the RMS of the axial profile.
std::vector<double> constraint_moments(const FeFunction &u, const Inclusion &inc, const ScalarField &g, int n_max);

/// sqrt(sum_k (1+i_k) avg_k^2) over modes 0..n+4 and all inclusions: a
/// computable surrogate of the H^1/2(Gamma) norm of g - u_h.
double constraint_residual(const FeFunction &u, const std::vector<Inclusion> &inclusions, const ScalarField &g,
                           int n);

/// Probed moments at frequencies n+1..n+4 (cos and sin, all inclusions).
std::vector<double> constraint_tail(const FeFunction &u, const std::vector<Inclusion> &inclusions,
                                    const ScalarField &g, int n);

/// Assembles, solves and measures one case. Errors are annotated with the
/// case identity and rethrown.
CaseOutcome run_case(const ManufacturedProblem &problem, const CaseSpec &spec, BulkCache &cache,
                     const RunOptions &options = {});

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
/// Least squares of log(y) against log(x) (or against x when `semilog`).
/// Returns nullopt with fewer than 3 points or non-positive data.
std::optional<LogLogFit> fit_rate(const std::vector<double> &x, const std::vector<double> &y, bool semilog = false);

struct RateRow {
  std::string problem;
  std::string method;
  /// "h", "epsilon" or "n"; the swept column is empty in the output.
  std::string axis;
  std::string quantity;
  std::optional<int> level;
  std::optional<double> epsilon;
  std::optional<int> n;
  double kappa = 0.0;
  int points = 0;
  double slope = 0.0;
  double r2 = 0.0;
  /// R^2 below 0.9.
  bool flagged = false;
};

struct SweepSpec {
  std::vector<int> levels;
  std::vector<double> epsilons;
  std::vector<int> orders;
  std::vector<double> kappas{0.0};
  Method method = Method::Reduced;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
  std::vector<RateRow> rates;
  int failures() const;
};

/// Sort key (problem, level, epsilon, n, kappa, method).
void sort_rows(std::vector<ErrorRow> &rows);
std::vector<RateRow> fit_rates(const std::vector<ErrorRow> &rows);

/// Runs the Cartesian product of the spec. Failed cases become rows with
/// `failure` set; the sweep continues. Rows are sorted independently of
/// completion order.
ErrorReport sweep(const ManufacturedProblem &problem, const SweepSpec &spec, const RunOptions &options = {},
                  int workers = 1, BulkCache *cache = nullptr);

struct ThreeCylinderResult {
  ErrorRow row;
  FeFunction field;
  /// Mode-0 normalized average of u_h on each lateral surface.
  std::vector<double> mode0_average;
  /// Per inclusion, moments of (1 - u_h) for modes 0..2n.
  std::vector<std::vector<double>> mode_residuals;
};

ThreeCylinderResult three_cylinder_case(int level, double epsilon, int n, BulkCache &cache,
                                        const RunOptions &options = {});

struct RobinStudy {
  std::vector<ErrorRow> rows;
  std::vector<double> kappas;
  /// ||u_kappa - u_0||_L2 per kappa.
  std::vector<double> difference_l2;
  /// max over multiplier rows of |C u - M Lambda - G| relative to ||G||.
  std::vector<double> robin_residual;
  /// The kappa = 0 Robin solve equals the Dirichlet solve bit for bit.
  bool dirichlet_limit_identical = false;
};

RobinStudy robin_consistency_case(const ManufacturedProblem &problem, int level, double epsilon, int n,
                                  const std::vector<double> &kappas, BulkCache &cache, const RunOptions &options = {});

} // namespace rlm
