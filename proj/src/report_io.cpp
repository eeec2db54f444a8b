#include "rlm/report_io.hpp"

#include "rlm/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rlm {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string opt(const std::optional<double> &v) { return v ? format_double(*v) : std::string(); }

template <class T> std::string opt_int(const std::optional<T> &v) { return v ? std::to_string(*v) : std::string(); }

} // namespace

std::string csv_text(const std::vector<ErrorRow> &rows_in, bool with_timings) {
  auto rows = rows_in;
  sort_rows(rows);
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto &r : rows) {
    const bool ok = r.failure.empty();
    os << r.problem << ',' << r.method << ',' << r.level << ',' << format_double(r.h) << ','
       << format_double(r.epsilon) << ',' << r.n << ',' << r.N << ',' << format_double(r.kappa) << ',';
    if (ok)
      os << r.dofs_bulk << ',' << r.dofs_lambda;
    else
      os << ',';
    os << ',' << opt(r.err_l2) << ',' << opt(r.err_h1) << ',' << opt(r.constraint_res) << ',' << opt(r.gap_l2)
       << ',' << opt(r.gap_h1) << ',' << opt(r.lambda0) << ',' << opt(r.max_u) << ','
       << (with_timings ? opt(r.solve_seconds) : std::string()) << '\n';
  }
  return os.str();
}

std::string rates_csv_text(const std::vector<RateRow> &rates) {
  std::ostringstream os;
  os << kRatesHeader << '\n';
  for (const auto &r : rates)
    os << r.problem << ',' << r.method << ',' << r.axis << ',' << r.quantity << ',' << opt_int(r.level) << ','
       << opt(r.epsilon) << ',' << opt_int(r.n) << ',' << format_double(r.kappa) << ',' << r.points << ','
       << format_double(r.slope) << ',' << format_double(r.r2) << ',' << (r.flagged ? "1" : "0") << '\n';
  return os.str();
}

std::string vtk_text(const FeFunction &field) {
  const auto &mesh = field.space.mesh();
  const auto np = mesh.n_vertices();
  const auto nv = mesh.cells_per_side() + 1;
  std::ostringstream os;
  os << "# vtk DataFile Version 3.0\n"
     << "u\n"
     << "ASCII\n"
     << "DATASET STRUCTURED_GRID\n"
     << "DIMENSIONS " << nv << ' ' << nv << ' ' << (mesh.dim() == 3 ? nv : 1) << '\n'
     << "POINTS " << np << " double\n";
  for (std::int64_t i = 0; i < np; ++i) {
    const auto p = mesh.vertex(i);
    os << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << '\n';
  }
  os << "POINT_DATA " << np << '\n' << "SCALARS u double 1\n" << "LOOKUP_TABLE default\n";
  for (std::int64_t i = 0; i < np; ++i)
    os << format_double(field.coefficients[i]) << '\n';
  return os.str();
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out)
    throw IoError("failed writing " + path.string());
}

void emit_csv(const ErrorReport &report, const std::filesystem::path &path, bool with_timings) {
  write_text(path, csv_text(report.rows, with_timings));
}

void emit_rates_csv(const ErrorReport &report, const std::filesystem::path &path) {
  write_text(path, rates_csv_text(report.rates));
}

void emit_vtk(const FeFunction &field, const std::filesystem::path &path) { write_text(path, vtk_text(field)); }

} // namespace rlm
