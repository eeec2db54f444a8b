#include "rlm/problems.hpp"

#include "rlm/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace rlm {

std::string to_string(ProblemId id) {
  switch (id) {
  case ProblemId::D1:
    return "D1";
  case ProblemId::D2:
    return "D2";
  case ProblemId::D3:
    return "D3";
  case ProblemId::TwoInclusions:
    return "TWO_INC";
  case ProblemId::ThreeCylinders:
    return "THREE_CYL";
  case ProblemId::Custom:
    return "CUSTOM";
  }
  return "?";
}

ProblemId parse_problem_id(const std::string &name) {
  for (auto id : {ProblemId::D1, ProblemId::D2, ProblemId::D3, ProblemId::TwoInclusions, ProblemId::ThreeCylinders})
    if (to_string(id) == name)
      return id;
  throw ConfigError("problem: unknown problem id \"" + name + "\"");
}

namespace {

using Complex = std::complex<double>;

// Gradient of Re f(z) for analytic f is (Re f', -Im f').
Point grad_of_real_part(Complex df) { return {df.real(), -df.imag(), 0.0}; }

double rho(const Point &p) { return std::hypot(p[0], p[1]); }

ExactField d1_exact(double eps) {
  return {[eps](const Point &p) { return rho(p) < eps ? -std::log(eps) : -0.5 * std::log(p[0] * p[0] + p[1] * p[1]); },
          [eps](const Point &p) -> Point {
            if (rho(p) < eps)
              return {0.0, 0.0, 0.0};
            const double r2 = p[0] * p[0] + p[1] * p[1];
            return {-p[0] / r2, -p[1] / r2, 0.0};
          }};
}

ExactField d2_exact(double eps) {
  return {[eps](const Point &p) {
            if (rho(p) < eps)
              return p[0];
            return p[0] * eps * eps / (p[0] * p[0] + p[1] * p[1]);
          },
          [eps](const Point &p) -> Point {
            if (rho(p) < eps)
              return {1.0, 0.0, 0.0};
            const Complex z(p[0], p[1]);
            return grad_of_real_part(-eps * eps / (z * z));
          }};
}

double d3_interior(const Point &p) {
  const double x = p[0], y = p[1];
  return 2 * x * x * x - x * x - 6 * x * y * y + x + y * y + 1;
}

double d3_exterior(double eps, const Point &p) {
  const double x = p[0], y = p[1];
  const double r2 = x * x + y * y;
  const double e2 = eps * eps, e4 = e2 * e2, e6 = e4 * e2;
  return 2 * e6 * x * (x * x - 3 * y * y) / (r2 * r2 * r2) + e4 * (-x * x + y * y) / (r2 * r2) + e2 * x / r2 +
         std::log(r2) / (2 * std::log(eps));
}

ExactField d3_exact(double eps) {
  return {[eps](const Point &p) { return rho(p) < eps ? d3_interior(p) : d3_exterior(eps, p); },
          [eps](const Point &p) -> Point {
            const Complex z(p[0], p[1]);
            if (rho(p) < eps)
              return grad_of_real_part(6.0 * z * z - 2.0 * z + 1.0);
            const double e2 = eps * eps, e4 = e2 * e2, e6 = e4 * e2;
            const Complex df = -6.0 * e6 / std::pow(z, 4) + 2.0 * e4 / std::pow(z, 3) - e2 / (z * z);
            Point g = grad_of_real_part(df);
            const double r2 = p[0] * p[0] + p[1] * p[1];
            g[0] += p[0] / (r2 * std::log(eps));
            g[1] += p[1] / (r2 * std::log(eps));
            return g;
          }};
}

ScalarField constant_field(double c) {
  return [c](const Point &) { return c; };
}

} // namespace

ManufacturedProblem make_problem(ProblemId id) {
  ManufacturedProblem pb;
  pb.id = id;
  pb.name = to_string(id);
  switch (id) {
  case ProblemId::D1:
  case ProblemId::D2:
  case ProblemId::D3: {
    pb.domain = BoxDomain::unit_box(2);
    pb.max_epsilon = 1.0;
    pb.inclusions = [](double eps) { return std::vector<Inclusion>{Inclusion::disk(0.0, 0.0, eps)}; };
    if (id == ProblemId::D1) {
      pb.exact = d1_exact;
      pb.data = [](double) {
        ScalarField u = [](const Point &p) { return -0.5 * std::log(p[0] * p[0] + p[1] * p[1]); };
        return ProblemData{constant_field(0.0), u, u, 0.0};
      };
    } else if (id == ProblemId::D2) {
      pb.exact = d2_exact;
      pb.data = [](double eps) {
        ScalarField u = [eps](const Point &p) { return p[0] * eps * eps / (p[0] * p[0] + p[1] * p[1]); };
        return ProblemData{constant_field(0.0), u, u, 0.0};
      };
    } else {
      pb.exact = d3_exact;
      pb.data = [](double eps) {
        return ProblemData{constant_field(0.0), d3_interior, [eps](const Point &p) { return d3_exterior(eps, p); },
                           0.0};
      };
    }
    break;
  }
  case ProblemId::TwoInclusions:
    pb.domain = BoxDomain::unit_box(2);
    pb.max_epsilon = 0.4;
    pb.inclusions = [](double eps) {
      return std::vector<Inclusion>{Inclusion::disk(-0.4, 0.0, eps), Inclusion::disk(0.4, 0.0, eps)};
    };
    pb.data = [](double) { return ProblemData{constant_field(0.0), constant_field(1.0), constant_field(0.0), 0.0}; };
    break;
  case ProblemId::ThreeCylinders:
    pb.domain = BoxDomain::unit_box(3);
    pb.max_epsilon = 0.4;
    pb.inclusions = [](double eps) {
      return std::vector<Inclusion>{Inclusion::cylinder(2, {-0.4, -0.4, 0.0}, -0.5, 0.0, eps),
                                    Inclusion::cylinder(2, {0.4, -0.4, 0.0}, 0.0, 0.5, eps),
                                    Inclusion::cylinder(2, {0.0, 0.4, 0.0}, -0.25, 0.25, eps)};
    };
    pb.data = [](double) { return ProblemData{constant_field(0.0), constant_field(1.0), constant_field(0.0), 0.0}; };
    break;
  case ProblemId::Custom:
    throw ParameterError("use make_custom_problem for custom geometries");
  }
  return pb;
}

ManufacturedProblem make_custom_problem(const BoxDomain &domain, std::vector<Inclusion> inclusions, double g,
                                        double boundary, double f, bool override_radius) {
  domain.validate();
  validate_inclusions(domain, inclusions);
  ManufacturedProblem pb;
  pb.id = ProblemId::Custom;
  pb.name = "CUSTOM";
  pb.domain = domain;
  pb.max_epsilon = std::numeric_limits<double>::infinity();
  pb.inclusions = [inclusions, override_radius](double eps) {
    auto out = inclusions;
    if (override_radius)
      for (auto &inc : out)
        inc.radius = eps;
    return out;
  };
  pb.data = [g, boundary, f](double) {
    return ProblemData{constant_field(f), constant_field(g), constant_field(boundary), 0.0};
  };
  return pb;
}

ExactValue exact_eval(const ManufacturedProblem &problem, double eps, const Point &p) {
  if (!problem.has_exact())
    throw UnsupportedError("problem " + problem.name + " has no exact solution");
  const auto field = problem.exact(eps);
  return {field.value(p), field.gradient(p)};
}

} // namespace rlm
