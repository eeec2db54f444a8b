#include "rlm/solver.hpp"

#include "rlm/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>

namespace rlm {

double relative_residual(const SaddleSystem &system, const Vector &u, const Vector &lambda) {
  Vector r_u = system.bulk->matrix() * u - system.bulk_rhs;
  if (system.n_multipliers() > 0)
    r_u += system.coupling.transpose() * lambda;
  double r2 = r_u.squaredNorm();
  if (system.n_multipliers() > 0) {
    Vector r_l = system.coupling * u - system.robin * lambda - system.constraint_rhs;
    r2 += r_l.squaredNorm();
  }
  const double b = std::sqrt(system.bulk_rhs.squaredNorm() + system.constraint_rhs.squaredNorm());
  return b > 0.0 ? std::sqrt(r2) / b : std::sqrt(r2);
}

namespace {

void solve_direct(const SaddleSystem &s, SolveReport &rep) {
  const auto &bulk = *s.bulk;
  const Vector u0 = bulk.solve(s.bulk_rhs);
  if (s.n_multipliers() == 0) {
    rep.u = u0;
    rep.lambda = Vector::Zero(0);
    return;
  }
  const Eigen::MatrixXd ct = Eigen::MatrixXd(s.coupling.transpose());
  const Eigen::MatrixXd y = bulk.solve(ct);
  Eigen::MatrixXd schur = s.coupling * y;
  schur += Eigen::MatrixXd(s.robin);
  schur = 0.5 * (schur + schur.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(schur);
  if (llt.info() != Eigen::Success)
    throw SolverError("multiplier block is singular: Schur complement C A^-1 C^T + M is not positive definite");
  const Vector rhs = s.coupling * u0 - s.constraint_rhs;
  rep.lambda = llt.solve(rhs);
  rep.u = u0 - y * rep.lambda;
}

void solve_schur_cg(const SaddleSystem &s, const SolverOptions &opt, SolveReport &rep) {
  const auto &bulk = *s.bulk;
  const Vector u0 = bulk.solve(s.bulk_rhs);
  if (s.n_multipliers() == 0) {
    rep.u = u0;
    rep.lambda = Vector::Zero(0);
    return;
  }
  auto apply = [&](const Vector &x) -> Vector {
    Vector ct = s.coupling.transpose() * x;
    return s.coupling * bulk.solve(ct) + s.robin * x;
  };
  const Vector b = s.coupling * u0 - s.constraint_rhs;
  Vector x = Vector::Zero(b.size());
  Vector r = b;
  Vector p = r;
  double rr = r.squaredNorm();
  const double bnorm = b.norm();
  const double target = opt.tolerance * 1e-2 * (bnorm > 0.0 ? bnorm : 1.0);
  int it = 0;
  double best = std::sqrt(rr);
  while (std::sqrt(rr) > target) {
    if (it >= opt.max_iterations)
      throw EffortExceededError("Schur complement CG did not converge within " + std::to_string(opt.max_iterations) +
                                    " iterations",
                                best / (bnorm > 0.0 ? bnorm : 1.0));
    const Vector ap = apply(p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0))
      throw SolverError("Schur complement CG breakdown: multiplier block is not positive definite");
    const double alpha = rr / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    best = std::min(best, std::sqrt(rr));
    ++it;
  }
  rep.iterations = it;
  rep.lambda = x;
  Vector ct = s.coupling.transpose() * x;
  rep.u = u0 - bulk.solve(ct);
}

} // namespace

SolveReport solve(const SaddleSystem &system, const SolverOptions &options) {
  if (!(options.tolerance > 0.0 && options.tolerance < 1.0))
    throw ParameterError("solver tolerance must be in (0, 1)");
  const auto start = std::chrono::steady_clock::now();
  SolveReport rep;
  if (options.path == SolverPath::Direct)
    solve_direct(system, rep);
  else
    solve_schur_cg(system, options, rep);
  rep.relative_residual = relative_residual(system, rep.u, rep.lambda);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!std::isfinite(rep.relative_residual) || rep.relative_residual > options.tolerance)
    throw SolverError("saddle solve residual " + std::to_string(rep.relative_residual) + " exceeds tolerance " +
                      std::to_string(options.tolerance));
  return rep;
}

InfSupEstimate estimate_infsup(const BulkOperator &a_norm, const SparseMatrix &coupling, const SparseMatrix &gram) {
  if (coupling.cols() != a_norm.n_dofs() || gram.rows() != coupling.rows() || gram.cols() != coupling.rows())
    throw ParameterError("inf-sup operands have inconsistent sizes");
  const Eigen::MatrixXd ct = Eigen::MatrixXd(coupling.transpose());
  const Eigen::MatrixXd y = a_norm.solve(ct);
  Eigen::MatrixXd s = coupling * y;
  s = 0.5 * (s + s.transpose()).eval();
  const Eigen::MatrixXd m = Eigen::MatrixXd(gram);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, m);
  if (eig.info() != Eigen::Success)
    throw SolverError("generalized eigenvalue solver failed in the inf-sup estimate");
  const double lmin = eig.eigenvalues()(0);
  const Vector v = eig.eigenvectors().col(0);
  InfSupEstimate est;
  est.beta = std::sqrt(std::max(lmin, 0.0));
  const Vector res = s * v - lmin * (m * v);
  const double scale = (s * v).norm();
  est.eigen_residual = scale > 0.0 ? res.norm() / scale : res.norm();
  return est;
}

InfSupEstimate estimate_infsup(const FeSpace &space, const std::vector<Inclusion> &inclusions, int n) {
  if (inclusions.empty())
    throw ParameterError("inf-sup estimate needs at least one inclusion");
  validate_inclusions(space.mesh().domain(), inclusions);
  const auto gram = BulkOperator::h1_gram(space);
  std::vector<SparseMatrix> cs, ms;
  std::vector<Vector> gs;
  for (const auto &inc : inclusions) {
    const auto block = make_inclusion_block(space, inc, n);
    cs.push_back(assemble_coupling(space, block));
    ms.push_back(assemble_robin(block, 1.0));
    gs.push_back(Vector::Zero(block.layout.size()));
  }
  const auto bc = DirichletConstraint::on_box_boundary(space, [](const Point &) { return 0.0; });
  const auto sys = build_saddle_system(gram, bc, Vector::Zero(space.n_dofs()), cs, ms, gs);
  auto est = estimate_infsup(*gram, sys.coupling, sys.robin);
  est.h = space.mesh().h();
  est.epsilon = inclusions.front().radius;
  est.n = n;
  return est;
}

} // namespace rlm
