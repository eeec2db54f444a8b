// Command line driver: solve, sweep, infsup, compare-full, robin.

#include "rlm/config.hpp"
#include "rlm/errors.hpp"
#include "rlm/report_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr const char *kVersion = "rlm 1.0.0";

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw rlm::IoError("cannot read config " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string vtk_name(const rlm::ErrorRow &r) {
  std::ostringstream os;
  os << "u_" << r.problem << "_L" << r.level << "_eps" << rlm::format_double(r.epsilon) << "_n" << r.n << "_k"
     << rlm::format_double(r.kappa) << "_" << r.method << ".vtk";
  return os.str();
}

void report_failures(const std::vector<rlm::ErrorRow> &rows) {
  for (const auto &r : rows)
    if (!r.failure.empty())
      std::cerr << "case failed: " << r.failure << '\n';
}

int run_solve(const rlm::RunConfig &cfg, const std::filesystem::path &out) {
  const auto problem = rlm::make_problem(cfg);
  const auto spec = rlm::make_sweep_spec(cfg);
  const auto options = rlm::make_run_options(cfg);
  rlm::BulkCache cache;
  rlm::ErrorReport report;
  for (int level : spec.levels)
    for (double eps : spec.epsilons)
      for (int n : spec.orders)
        for (double kappa : spec.kappas) {
          const rlm::CaseSpec c{level, eps, n, kappa, spec.method};
          try {
            auto outcome = rlm::run_case(problem, c, cache, options);
            if (cfg.export_vtk && outcome.field)
              rlm::emit_vtk(*outcome.field, out / vtk_name(outcome.rows.front()));
            for (auto &r : outcome.rows)
              report.rows.push_back(std::move(r));
          } catch (const rlm::CaseError &e) {
            rlm::ErrorRow row;
            row.problem = problem.name;
            row.method = rlm::to_string(c.method);
            row.level = level;
            row.h = problem.domain.side(0) / std::ldexp(1.0, level);
            row.epsilon = eps;
            row.n = n;
            row.N = 2 * n + 1;
            row.kappa = kappa;
            row.failure = e.what();
            report.rows.push_back(row);
          }
        }
  rlm::sort_rows(report.rows);
  rlm::emit_csv(report, out / "results.csv", !cfg.deterministic);
  report_failures(report.rows);
  return report.failures() > 0 ? 2 : 0;
}

int run_sweep(const rlm::RunConfig &cfg, const std::filesystem::path &out) {
  const auto problem = rlm::make_problem(cfg);
  const auto report = rlm::sweep(problem, rlm::make_sweep_spec(cfg), rlm::make_run_options(cfg), cfg.workers);
  rlm::emit_csv(report, out / "results.csv", !cfg.deterministic);
  rlm::emit_rates_csv(report, out / "rates.csv");
  for (const auto &r : report.rates)
    if (r.flagged)
      std::cerr << "warning: rate fit " << r.problem << " " << r.method << " along " << r.axis << " (" << r.quantity
                << ") has R^2 = " << r.r2 << '\n';
  report_failures(report.rows);
  return report.failures() > 0 ? 2 : 0;
}

int run_infsup(const rlm::RunConfig &cfg, const std::filesystem::path &out) {
  const auto problem = rlm::make_problem(cfg);
  const auto spec = rlm::make_sweep_spec(cfg);
  std::ostringstream os;
  os << "problem,level,h,epsilon,n,N,beta,eigen_residual\n";
  int failures = 0;
  for (int level : spec.levels) {
    const rlm::FeSpace space(rlm::build_box_mesh(problem.domain, level));
    for (double eps : spec.epsilons)
      for (int n : spec.orders) {
        os << problem.name << ',' << level << ',' << rlm::format_double(space.mesh().h()) << ','
           << rlm::format_double(eps) << ',' << n << ',' << 2 * n + 1 << ',';
        try {
          const auto est = rlm::estimate_infsup(space, problem.inclusions(eps), n);
          os << rlm::format_double(est.beta) << ',' << rlm::format_double(est.eigen_residual) << '\n';
        } catch (const rlm::Error &e) {
          ++failures;
          os << ",\n";
          std::cerr << "infsup case failed (level " << level << ", epsilon " << eps << ", n " << n
                    << "): " << e.what() << '\n';
        }
      }
  }
  rlm::write_text(out / "infsup.csv", os.str());
  return failures > 0 ? 2 : 0;
}

int run_robin(const rlm::RunConfig &cfg, const std::filesystem::path &out) {
  const auto problem = rlm::make_problem(cfg);
  const auto spec = rlm::make_sweep_spec(cfg);
  const auto options = rlm::make_run_options(cfg);
  std::vector<double> kappas;
  for (double k : cfg.kappas)
    if (k > 0.0)
      kappas.push_back(k);
  if (kappas.empty())
    throw rlm::ConfigError("kappas: the robin subcommand needs at least one positive value");
  rlm::BulkCache cache;
  rlm::ErrorReport report;
  std::ostringstream os;
  os << "problem,level,epsilon,n,kappa,diff_L2,robin_residual,kappa0_identical\n";
  int failures = 0;
  for (int level : spec.levels)
    for (double eps : spec.epsilons)
      for (int n : spec.orders) {
        try {
          const auto study = rlm::robin_consistency_case(problem, level, eps, n, kappas, cache, options);
          for (std::size_t i = 0; i < study.kappas.size(); ++i)
            os << problem.name << ',' << level << ',' << rlm::format_double(eps) << ',' << n << ','
               << rlm::format_double(study.kappas[i]) << ',' << rlm::format_double(study.difference_l2[i]) << ','
               << rlm::format_double(study.robin_residual[i]) << ',' << (study.dirichlet_limit_identical ? 1 : 0)
               << '\n';
          report.rows.insert(report.rows.end(), study.rows.begin(), study.rows.end());
        } catch (const rlm::CaseError &e) {
          ++failures;
          std::cerr << "case failed: " << e.what() << '\n';
        }
      }
  rlm::write_text(out / "robin.csv", os.str());
  rlm::emit_csv(report, out / "results.csv", !cfg.deterministic);
  return failures > 0 ? 2 : 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Reduced Lagrange multiplier solver for thin inclusions"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int workers = 0;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--output", output_dir, "output directory (default ./out)");
    sub->add_option("--workers", workers, "parallel sweep workers")->check(CLI::PositiveNumber);
  };
  auto *solve = app.add_subcommand("solve", "solve every configured case, optionally exporting VTK fields");
  auto *sweep = app.add_subcommand("sweep", "run the configured sweep and fit convergence rates");
  auto *infsup = app.add_subcommand("infsup", "estimate the discrete inf-sup constant");
  auto *compare = app.add_subcommand("compare-full", "solve reduced and full-order problems and report gaps");
  auto *robin = app.add_subcommand("robin", "Robin limit study over the configured kappas");
  for (auto *s : {solve, sweep, infsup, compare, robin})
    add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  rlm::RunConfig cfg;
  std::filesystem::path out;
  try {
    cfg = rlm::parse_config(read_file(config_path));
    if (!output_dir.empty())
      cfg.output_dir = output_dir;
    if (workers > 0)
      cfg.workers = workers;
    if (compare->parsed())
      cfg.method = rlm::Method::Both;
    if (cfg.method != rlm::Method::Reduced && rlm::make_problem(cfg).dim() != 2)
      throw rlm::ConfigError("method: the full-order oracle is only available in 2D");
    out = cfg.output_dir;
    std::filesystem::create_directories(out);
    rlm::write_text(out / "config.json", rlm::to_json(cfg));
    rlm::write_text(out / "version.txt", std::string(kVersion) + "\n");
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (solve->parsed() || compare->parsed())
      return run_solve(cfg, out);
    if (sweep->parsed())
      return run_sweep(cfg, out);
    if (infsup->parsed())
      return run_infsup(cfg, out);
    return run_robin(cfg, out);
  } catch (const rlm::ConfigError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
