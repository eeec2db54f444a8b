#pragma once

#include "rlm/experiments.hpp"

#include <filesystem>
#include <string>

namespace rlm {

inline constexpr const char *kCsvHeader =
    "problem,method,level,h,epsilon,n,N,kappa,dofs_bulk,dofs_lambda,err_L2,err_H1,constraint_res,gap_L2,gap_H1,"
    "lambda0,max_u,solve_seconds";

inline constexpr const char *kRatesHeader = "problem,method,axis,quantity,level,epsilon,n,kappa,points,slope,r2,flagged";

/// Shortest representation that round-trips to the same double.
std::string format_double(double v);

std::string csv_text(const std::vector<ErrorRow> &rows, bool with_timings = true);
std::string rates_csv_text(const std::vector<RateRow> &rates);
/// Legacy ASCII VTK, STRUCTURED_GRID with point scalars "u" in dof order.
std::string vtk_text(const FeFunction &field);

/// Rows are sorted by (problem, level, epsilon, n, kappa, method) before
/// writing. Throws IoError naming the path.
void emit_csv(const ErrorReport &report, const std::filesystem::path &path, bool with_timings = true);
void emit_rates_csv(const ErrorReport &report, const std::filesystem::path &path);
void emit_vtk(const FeFunction &field, const std::filesystem::path &path);
void write_text(const std::filesystem::path &path, const std::string &text);

} // namespace rlm
