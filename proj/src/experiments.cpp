#include "rlm/experiments.hpp"

#include "rlm/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace rlm {

std::string to_string(Method m) {
  switch (m) {
  case Method::Reduced:
    return "reduced";
  case Method::Full:
    return "full";
  case Method::Both:
    return "both";
  }
  return "?";
}

Method parse_method(const std::string &s) {
  for (auto m : {Method::Reduced, Method::Full, Method::Both})
    if (to_string(m) == s)
      return m;
  throw ConfigError("method: expected \"reduced\", \"full\" or \"both\", got \"" + s + "\"");
}

std::shared_ptr<const BulkOperator> BulkCache::get(const BoxDomain &domain, int level) {
  const auto key = std::make_tuple(domain.dim, level,
                                   std::array<double, 6>{domain.lower[0], domain.lower[1], domain.lower[2],
                                                         domain.upper[0], domain.upper[1], domain.upper[2]});
  std::lock_guard lock(mutex_);
  auto it = cache_.find(key);
  if (it != cache_.end())
    return it->second;
  auto op = BulkOperator::stiffness(FeSpace(build_box_mesh(domain, level)));
  cache_.emplace(key, op);
  return op;
}

void BulkCache::clear() {
  std::lock_guard lock(mutex_);
  cache_.clear();
}

std::vector<double> constraint_moments(const FeFunction &u, const Inclusion &inc, const ScalarField &g, int n_max) {
  const auto block = make_inclusion_block(u.space, inc, n_max);
  std::vector<double> samples;
  samples.reserve(block.quad.points.size());
  for (const auto &q : block.quad.points)
    samples.push_back(g(q.x) - evaluate(u, q.x));
  std::vector<double> out;
  for (int k = 0; k < block.basis.size(); ++k) {
    const auto avg = weighted_average(samples, block.basis, block.quad, k);
    if (avg.size() == 1) {
      out.push_back(avg[0]);
    } else {
      double s = 0.0;
      for (double v : avg)
        s += v * v;
      out.push_back(std::sqrt(s / static_cast<double>(avg.size())));
    }
  }
  return out;
}

double constraint_residual(const FeFunction &u, const std::vector<Inclusion> &inclusions, const ScalarField &g,
                           int n) {
  double s = 0.0;
  for (const auto &inc : inclusions) {
    const auto m = constraint_moments(u, inc, g, n + 4);
    for (std::size_t k = 0; k < m.size(); ++k)
      s += (1.0 + ModalBasis::frequency(static_cast<int>(k))) * m[k] * m[k];
  }
  return std::sqrt(s);
}

std::vector<double> constraint_tail(const FeFunction &u, const std::vector<Inclusion> &inclusions,
                                    const ScalarField &g, int n) {
  std::vector<double> tail;
  for (const auto &inc : inclusions) {
    const auto m = constraint_moments(u, inc, g, n + 4);
    for (std::size_t k = 0; k < m.size(); ++k)
      if (ModalBasis::frequency(static_cast<int>(k)) > n)
        tail.push_back(m[k]);
  }
  return tail;
}

namespace {

std::string case_label(const ManufacturedProblem &problem, const CaseSpec &spec) {
  std::ostringstream os;
  os << "case (" << problem.name << ", level " << spec.level << ", epsilon " << spec.epsilon << ", n " << spec.n
     << ", kappa " << spec.kappa << ", " << to_string(spec.method) << ")";
  return os.str();
}

void validate_case(const ManufacturedProblem &problem, const CaseSpec &spec) {
  if (!(spec.epsilon > 0.0) || !(spec.epsilon < problem.max_epsilon))
    throw ParameterError("epsilon must lie in (0, " + std::to_string(problem.max_epsilon) + ")");
  if (spec.n < 0)
    throw ParameterError("Fourier order n must be non-negative");
  if (!(spec.kappa >= 0.0))
    throw ParameterError("Robin parameter kappa must be non-negative");
  if (spec.level < 0 || spec.level > max_level(problem.dim()))
    throw CapacityError("mesh level out of range");
}

ErrorRow base_row(const ManufacturedProblem &problem, const CaseSpec &spec, const FeSpace &space, Method m) {
  ErrorRow row;
  row.problem = problem.name;
  row.method = to_string(m);
  row.level = spec.level;
  row.h = space.mesh().h();
  row.epsilon = spec.epsilon;
  row.n = spec.n;
  row.N = 2 * spec.n + 1;
  row.kappa = spec.kappa;
  row.dofs_bulk = space.n_dofs();
  return row;
}

void measure(const ManufacturedProblem &problem, const CaseSpec &spec, const FeFunction &u,
             const std::vector<Inclusion> &inclusions, const ProblemData &data, ErrorRow &row) {
  if (problem.has_exact()) {
    const auto e = error_norms(u, problem.exact(spec.epsilon));
    row.err_l2 = e.l2;
    row.err_h1 = e.h1_semi;
  }
  row.constraint_res = constraint_residual(u, inclusions, data.g, spec.n);
  row.max_u = u.coefficients.maxCoeff();
}

// Mode-0 multiplier value of the first inclusion, reported as the normal
// derivative jump with the normal pointing into the inclusion.
double reduced_lambda0(const ReducedSystem &rs, const Vector &lambda) {
  const auto &blk = rs.system.blocks.front();
  const auto &layout = rs.blocks.front().layout;
  double s = 0.0;
  for (int a = 0; a < layout.n_nodes; ++a)
    s += lambda[blk.offset + layout.index(a, 0)];
  return -s / layout.n_nodes;
}

} // namespace

CaseOutcome run_case(const ManufacturedProblem &problem, const CaseSpec &spec, BulkCache &cache,
                     const RunOptions &options) {
  try {
    validate_case(problem, spec);
    const auto inclusions = problem.inclusions(spec.epsilon);
    auto data = problem.data(spec.epsilon);
    data.kappa = spec.kappa;
    const auto bulk = cache.get(problem.domain, spec.level);
    const auto &space = bulk->space();

    CaseOutcome out;
    std::optional<Vector> u_red, u_full;
    if (spec.method != Method::Full) {
      const auto rs = assemble_reduced_system(bulk, inclusions, spec.n, data);
      const auto rep = solve(rs.system, options.solver);
      auto row = base_row(problem, spec, space, Method::Reduced);
      row.dofs_lambda = rs.system.n_multipliers();
      const FeFunction u(space, rep.u);
      measure(problem, spec, u, inclusions, data, row);
      row.lambda0 = reduced_lambda0(rs, rep.lambda);
      row.solve_seconds = rep.seconds;
      out.rows.push_back(row);
      out.field = u;
      out.lambda = rep.lambda;
      u_red = rep.u;
    }
    if (spec.method != Method::Reduced) {
      if (problem.dim() != 2)
        throw UnsupportedError("the full-order oracle is two dimensional only");
      InterfaceMesh imesh{options.full_order_segments};
      const auto full = solve_full_order(bulk, inclusions, imesh, data, options.solver);
      auto row = base_row(problem, spec, space, Method::Full);
      row.dofs_lambda = full.report.lambda.size();
      const FeFunction u(space, full.report.u);
      measure(problem, spec, u, inclusions, data, row);
      row.lambda0 = -full.lambda.front().mean();
      row.solve_seconds = full.report.seconds;
      out.rows.push_back(row);
      if (!out.field) {
        out.field = u;
        out.lambda = full.report.lambda;
      }
      u_full = full.report.u;
    }
    if (u_red && u_full) {
      const auto gap = reduction_gap(space, *u_full, *u_red);
      for (auto &row : out.rows) {
        row.gap_l2 = gap.l2;
        row.gap_h1 = gap.h1_semi;
      }
    }
    return out;
  } catch (const std::exception &e) {
    throw CaseError(case_label(problem, spec) + ": " + e.what());
  }
}

std::optional<LogLogFit> fit_rate(const std::vector<double> &x, const std::vector<double> &y, bool semilog) {
  if (x.size() != y.size() || x.size() < 3)
    return std::nullopt;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0) || (!semilog && !(x[i] > 0.0)))
      return std::nullopt;
    lx.push_back(semilog ? x[i] : std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0)
    return std::nullopt;
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

int ErrorReport::failures() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const ErrorRow &r) { return !r.failure.empty(); }));
}

void sort_rows(std::vector<ErrorRow> &rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ErrorRow &a, const ErrorRow &b) {
    return std::tie(a.problem, a.level, a.epsilon, a.n, a.kappa, a.method) <
           std::tie(b.problem, b.level, b.epsilon, b.n, b.kappa, b.method);
  });
}

std::vector<RateRow> fit_rates(const std::vector<ErrorRow> &rows) {
  std::vector<RateRow> out;
  struct Series {
    std::vector<double> x, l2, h1;
  };
  auto emit = [&](RateRow proto, const Series &s, bool semilog) {
    for (const auto &[name, ys] : {std::pair{"err_L2", &s.l2}, std::pair{"err_H1", &s.h1}}) {
      if (ys->size() != s.x.size())
        continue;
      const auto fit = fit_rate(s.x, *ys, semilog);
      if (!fit)
        continue;
      RateRow r = proto;
      r.quantity = name;
      r.points = static_cast<int>(s.x.size());
      r.slope = fit->slope;
      r.r2 = fit->r2;
      r.flagged = fit->r2 < 0.9;
      out.push_back(r);
    }
  };
  auto add = [](Series &s, double x, const ErrorRow &r) {
    s.x.push_back(x);
    if (r.err_l2)
      s.l2.push_back(*r.err_l2);
    if (r.err_h1)
      s.h1.push_back(*r.err_h1);
  };

  std::vector<ErrorRow> ok;
  for (const auto &r : rows)
    if (r.failure.empty())
      ok.push_back(r);
  sort_rows(ok);

  // Along h: fixed (problem, method, epsilon, n, kappa).
  std::map<std::tuple<std::string, std::string, double, int, double>, Series> by_h;
  std::map<std::tuple<std::string, std::string, int, int, double>, Series> by_eps;
  std::map<std::tuple<std::string, std::string, int, double, double>, Series> by_n;
  for (const auto &r : ok) {
    add(by_h[{r.problem, r.method, r.epsilon, r.n, r.kappa}], r.h, r);
    add(by_eps[{r.problem, r.method, r.level, r.n, r.kappa}], r.epsilon, r);
    add(by_n[{r.problem, r.method, r.level, r.epsilon, r.kappa}], static_cast<double>(r.n), r);
  }
  for (const auto &[k, s] : by_h) {
    RateRow p;
    std::tie(p.problem, p.method, std::ignore, std::ignore, p.kappa) = k;
    p.axis = "h";
    p.epsilon = std::get<2>(k);
    p.n = std::get<3>(k);
    emit(p, s, false);
  }
  for (const auto &[k, s] : by_eps) {
    RateRow p;
    std::tie(p.problem, p.method, std::ignore, std::ignore, p.kappa) = k;
    p.axis = "epsilon";
    p.level = std::get<2>(k);
    p.n = std::get<3>(k);
    emit(p, s, false);
  }
  for (const auto &[k, s] : by_n) {
    RateRow p;
    std::tie(p.problem, p.method, std::ignore, std::ignore, p.kappa) = k;
    p.axis = "n";
    p.level = std::get<2>(k);
    p.epsilon = std::get<3>(k);
    emit(p, s, true);
  }
  return out;
}

ErrorReport sweep(const ManufacturedProblem &problem, const SweepSpec &spec, const RunOptions &options, int workers,
                  BulkCache *cache) {
  if (spec.levels.empty() || spec.epsilons.empty() || spec.orders.empty() || spec.kappas.empty())
    throw ParameterError("sweep lists must be non-empty");
  BulkCache local;
  BulkCache &bc = cache ? *cache : local;

  // Level-major so a bulk factorization is reused by consecutive cases.
  std::vector<CaseSpec> cases;
  for (int level : spec.levels)
    for (double eps : spec.epsilons)
      for (int n : spec.orders)
        for (double kappa : spec.kappas)
          cases.push_back({level, eps, n, kappa, spec.method});

  std::vector<std::vector<ErrorRow>> results(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      const auto &c = cases[i];
      try {
        results[i] = run_case(problem, c, bc, options).rows;
      } catch (const std::exception &e) {
        ErrorRow row;
        row.problem = problem.name;
        row.method = to_string(c.method);
        row.level = c.level;
        row.h = problem.domain.side(0) / std::ldexp(1.0, std::max(c.level, 0));
        row.epsilon = c.epsilon;
        row.n = c.n;
        row.N = 2 * c.n + 1;
        row.kappa = c.kappa;
        row.failure = e.what();
        results[i] = {row};
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(workers, static_cast<int>(cases.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back(worker);
  }

  ErrorReport report;
  for (auto &r : results)
    for (auto &row : r)
      report.rows.push_back(std::move(row));
  sort_rows(report.rows);
  report.rates = fit_rates(report.rows);
  return report;
}

ThreeCylinderResult three_cylinder_case(int level, double epsilon, int n, BulkCache &cache,
                                        const RunOptions &options) {
  const auto problem = make_problem(ProblemId::ThreeCylinders);
  auto outcome = run_case(problem, {level, epsilon, n, 0.0, Method::Reduced}, cache, options);
  ThreeCylinderResult res{outcome.rows.front(), *outcome.field, {}, {}};
  const ScalarField one = [](const Point &) { return 1.0; };
  for (const auto &inc : problem.inclusions(epsilon)) {
    auto m = constraint_moments(res.field, inc, one, n);
    // Mean (not RMS) of the mode-0 profile of u_h.
    const auto block = make_inclusion_block(res.field.space, inc, n);
    const auto samples = sample(block.quad, [&](const Point &p) { return evaluate(res.field, p); });
    const auto avg = weighted_average(samples, block.basis, block.quad, 0);
    double mean = 0.0;
    for (double v : avg)
      mean += v;
    res.mode0_average.push_back(mean / static_cast<double>(avg.size()));
    res.mode_residuals.push_back(std::move(m));
  }
  return res;
}

RobinStudy robin_consistency_case(const ManufacturedProblem &problem, int level, double epsilon, int n,
                                  const std::vector<double> &kappas, BulkCache &cache, const RunOptions &options) {
  const CaseSpec base{level, epsilon, n, 0.0, Method::Reduced};
  try {
    validate_case(problem, base);
    for (double k : kappas)
      if (!(k > 0.0))
        throw ParameterError("Robin study expects positive kappa values");
    const auto inclusions = problem.inclusions(epsilon);
    const auto bulk = cache.get(problem.domain, level);
    const auto &space = bulk->space();

    auto data = problem.data(epsilon);
    data.kappa = 0.0;
    const auto dirichlet = solve(assemble_reduced_system(bulk, inclusions, n, data).system, options.solver);

    RobinStudy study;
    // kappa = 0 through the Robin assembly path.
    {
      auto d0 = problem.data(epsilon);
      d0.kappa = 0.0;
      const auto rs = assemble_reduced_system(bulk, inclusions, n, d0);
      const auto rep = solve(rs.system, options.solver);
      study.dirichlet_limit_identical =
          rep.u.size() == dirichlet.u.size() && (rep.u.array() == dirichlet.u.array()).all() &&
          (rep.lambda.array() == dirichlet.lambda.array()).all();
    }
    for (double kappa : kappas) {
      auto dk = problem.data(epsilon);
      dk.kappa = kappa;
      const auto rs = assemble_reduced_system(bulk, inclusions, n, dk);
      const auto rep = solve(rs.system, options.solver);
      const FeFunction u(space, rep.u);
      CaseSpec spec = base;
      spec.kappa = kappa;
      auto row = base_row(problem, spec, space, Method::Reduced);
      row.dofs_lambda = rs.system.n_multipliers();
      measure(problem, spec, u, inclusions, dk, row);
      row.lambda0 = reduced_lambda0(rs, rep.lambda);
      row.solve_seconds = rep.seconds;
      study.rows.push_back(row);
      study.kappas.push_back(kappa);
      study.difference_l2.push_back(reduction_gap(space, rep.u, dirichlet.u).l2);
      const Vector r = rs.system.coupling * rep.u - rs.system.robin * rep.lambda - rs.system.constraint_rhs;
      const double scale = std::max(rs.system.constraint_rhs.cwiseAbs().maxCoeff(), 1e-300);
      study.robin_residual.push_back(r.cwiseAbs().maxCoeff() / scale);
    }
    return study;
  } catch (const std::exception &e) {
    throw CaseError(case_label(problem, base) + " (Robin study): " + e.what());
  }
}

} // namespace rlm
