#include "rlm/config.hpp"

#include "rlm/errors.hpp"

#include <json.hpp>

#include <set>

namespace rlm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &what) { throw ConfigError(path + ": " + what); }

void reject_unknown(const json &obj, const std::string &path, const std::set<std::string> &allowed) {
  for (const auto &[key, value] : obj.items())
    if (!allowed.count(key))
      fail(path.empty() ? key : path + "." + key, "unknown key");
}

std::string join(const std::string &path, const std::string &key) { return path.empty() ? key : path + "." + key; }

double get_number(const json &v, const std::string &path) {
  if (!v.is_number())
    fail(path, "expected a number");
  return v.get<double>();
}

int get_int(const json &v, const std::string &path) {
  if (!v.is_number_integer())
    fail(path, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json &v, const std::string &path) {
  if (!v.is_boolean())
    fail(path, "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json &v, const std::string &path) {
  if (!v.is_string())
    fail(path, "expected a string");
  return v.get<std::string>();
}

const json &get_array(const json &v, const std::string &path, bool allow_empty = false) {
  if (!v.is_array())
    fail(path, "expected an array");
  if (!allow_empty && v.empty())
    fail(path, "must not be empty");
  return v;
}

Point get_point(const json &v, const std::string &path, int dim) {
  get_array(v, path);
  if (static_cast<int>(v.size()) != dim)
    fail(path, "expected " + std::to_string(dim) + " coordinates");
  Point p{};
  for (int a = 0; a < dim; ++a)
    p[a] = get_number(v[a], path + "[" + std::to_string(a) + "]");
  return p;
}

int parse_axis(const json &v, const std::string &path) {
  const auto s = get_string(v, path);
  if (s == "x")
    return 0;
  if (s == "y")
    return 1;
  if (s == "z")
    return 2;
  fail(path, "expected \"x\", \"y\" or \"z\"");
}

void parse_custom(const json &c, RunConfig &cfg) {
  const std::string path = "custom";
  if (!c.is_object())
    fail(path, "expected an object");
  reject_unknown(c, path, {"domain", "inclusions", "g", "boundary", "f"});
  if (!c.contains("domain"))
    fail(join(path, "domain"), "required");
  const auto &d = c["domain"];
  if (!d.is_object())
    fail(join(path, "domain"), "expected an object");
  reject_unknown(d, join(path, "domain"), {"lower", "upper"});
  if (!d.contains("lower") || !d.contains("upper"))
    fail(join(path, "domain"), "requires \"lower\" and \"upper\"");
  const int dim = static_cast<int>(d["lower"].is_array() ? d["lower"].size() : 0);
  if (dim != 2 && dim != 3)
    fail("custom.domain.lower", "expected 2 or 3 coordinates");
  cfg.custom_domain.dim = dim;
  cfg.custom_domain.lower = get_point(d["lower"], "custom.domain.lower", dim);
  cfg.custom_domain.upper = get_point(d["upper"], "custom.domain.upper", dim);
  for (int a = 0; a < dim; ++a)
    if (!(cfg.custom_domain.upper[a] > cfg.custom_domain.lower[a]))
      fail("custom.domain.upper[" + std::to_string(a) + "]", "must exceed the lower corner");

  if (!c.contains("inclusions"))
    fail("custom.inclusions", "required");
  const auto &incs = get_array(c["inclusions"], "custom.inclusions");
  for (std::size_t i = 0; i < incs.size(); ++i) {
    const std::string ip = "custom.inclusions[" + std::to_string(i) + "]";
    const auto &j = incs[i];
    if (!j.is_object())
      fail(ip, "expected an object");
    if (!j.contains("type") || !j.contains("center") || !j.contains("radius"))
      fail(ip, "requires \"type\", \"center\" and \"radius\"");
    const auto type = get_string(j["type"], ip + ".type");
    const double r = get_number(j["radius"], ip + ".radius");
    if (!(r > 0.0))
      fail(ip + ".radius", "must be positive");
    if (type == "disk") {
      reject_unknown(j, ip, {"type", "center", "radius"});
      if (dim != 2)
        fail(ip + ".type", "disks require a 2D domain");
      const auto c2 = get_point(j["center"], ip + ".center", 2);
      cfg.custom_inclusions.push_back(Inclusion::disk(c2[0], c2[1], r));
    } else if (type == "cylinder") {
      reject_unknown(j, ip, {"type", "center", "radius", "axis", "range"});
      if (dim != 3)
        fail(ip + ".type", "cylinders require a 3D domain");
      if (!j.contains("axis") || !j.contains("range"))
        fail(ip, "cylinders require \"axis\" and \"range\"");
      const int axis = parse_axis(j["axis"], ip + ".axis");
      const auto c3 = get_point(j["center"], ip + ".center", 3);
      const auto &range = get_array(j["range"], ip + ".range");
      if (range.size() != 2)
        fail(ip + ".range", "expected [lo, hi]");
      const double lo = get_number(range[0], ip + ".range[0]");
      const double hi = get_number(range[1], ip + ".range[1]");
      if (!(hi > lo))
        fail(ip + ".range", "hi must exceed lo");
      cfg.custom_inclusions.push_back(Inclusion::cylinder(axis, c3, lo, hi, r));
    } else {
      fail(ip + ".type", "expected \"disk\" or \"cylinder\"");
    }
  }
  if (c.contains("g"))
    cfg.custom_g = get_number(c["g"], "custom.g");
  if (c.contains("boundary"))
    cfg.custom_boundary = get_number(c["boundary"], "custom.boundary");
  if (c.contains("f"))
    cfg.custom_f = get_number(c["f"], "custom.f");
  // Geometry errors surface before any allocation.
  validate_inclusions(cfg.custom_domain, cfg.custom_inclusions);
}

} // namespace

RunConfig parse_config(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object())
    fail("$", "expected a JSON object");
  reject_unknown(doc, "", {"problem", "custom", "levels", "epsilons", "orders", "kappas", "method", "solver",
                           "full_order", "output", "workers", "deterministic", "vtk"});
  RunConfig cfg;
  if (!doc.contains("problem"))
    fail("problem", "required");
  const auto pname = get_string(doc["problem"], "problem");
  if (pname == "CUSTOM") {
    cfg.problem = ProblemId::Custom;
    if (!doc.contains("custom"))
      fail("custom", "required when problem is CUSTOM");
    parse_custom(doc["custom"], cfg);
  } else {
    cfg.problem = parse_problem_id(pname);
    if (doc.contains("custom"))
      fail("custom", "only allowed when problem is CUSTOM");
  }
  const int dim = cfg.problem == ProblemId::Custom ? cfg.custom_domain.dim
                                                   : make_problem(cfg.problem).dim();

  if (!doc.contains("levels"))
    fail("levels", "required");
  const auto &levels = get_array(doc["levels"], "levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string p = "levels[" + std::to_string(i) + "]";
    const int l = get_int(levels[i], p);
    if (l < 0 || l > max_level(dim))
      fail(p, "must be in [0, " + std::to_string(max_level(dim)) + "]");
    cfg.levels.push_back(l);
  }

  const double max_eps =
      cfg.problem == ProblemId::Custom ? std::numeric_limits<double>::infinity() : make_problem(cfg.problem).max_epsilon;
  if (doc.contains("epsilons")) {
    const auto &eps = get_array(doc["epsilons"], "epsilons");
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const std::string p = "epsilons[" + std::to_string(i) + "]";
      const double e = get_number(eps[i], p);
      if (!(e > 0.0))
        fail(p, "must be positive");
      if (!(e < max_eps))
        fail(p, "must be smaller than the distance " + std::to_string(max_eps) + " allowed by the geometry");
      cfg.epsilons.push_back(e);
    }
  } else if (cfg.problem != ProblemId::Custom) {
    fail("epsilons", "required");
  }
  if (cfg.problem == ProblemId::Custom)
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
      auto incs = cfg.custom_inclusions;
      for (auto &inc : incs)
        inc.radius = cfg.epsilons[i];
      try {
        validate_inclusions(cfg.custom_domain, incs);
      } catch (const GeometryError &e) {
        throw GeometryError("epsilons[" + std::to_string(i) + "]: " + e.what());
      }
    }

  if (!doc.contains("orders"))
    fail("orders", "required");
  const auto &orders = get_array(doc["orders"], "orders");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const std::string p = "orders[" + std::to_string(i) + "]";
    const int n = get_int(orders[i], p);
    if (n < 0)
      fail(p, "must be non-negative");
    cfg.orders.push_back(n);
  }

  if (doc.contains("kappas")) {
    cfg.kappas.clear();
    const auto &ks = get_array(doc["kappas"], "kappas");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const std::string p = "kappas[" + std::to_string(i) + "]";
      const double k = get_number(ks[i], p);
      if (!(k >= 0.0))
        fail(p, "must be non-negative");
      cfg.kappas.push_back(k);
    }
  }

  if (doc.contains("method")) {
    try {
      cfg.method = parse_method(get_string(doc["method"], "method"));
    } catch (const ConfigError &) {
      fail("method", "expected \"reduced\", \"full\" or \"both\"");
    }
    if (cfg.method != Method::Reduced && dim != 2)
      fail("method", "the full-order oracle is only available in 2D");
  }

  if (doc.contains("solver")) {
    const auto &s = doc["solver"];
    if (!s.is_object())
      fail("solver", "expected an object");
    reject_unknown(s, "solver", {"path", "tol", "max_iterations"});
    if (s.contains("path")) {
      const auto path = get_string(s["path"], "solver.path");
      if (path == "direct")
        cfg.solver.path = SolverPath::Direct;
      else if (path == "schur_cg")
        cfg.solver.path = SolverPath::SchurCg;
      else
        fail("solver.path", "expected \"direct\" or \"schur_cg\"");
    }
    if (s.contains("tol")) {
      cfg.solver.tolerance = get_number(s["tol"], "solver.tol");
      if (!(cfg.solver.tolerance > 0.0 && cfg.solver.tolerance < 1.0))
        fail("solver.tol", "must be in (0, 1)");
    }
    if (s.contains("max_iterations")) {
      cfg.solver.max_iterations = get_int(s["max_iterations"], "solver.max_iterations");
      if (cfg.solver.max_iterations < 1)
        fail("solver.max_iterations", "must be positive");
    }
  }

  if (doc.contains("full_order")) {
    const auto &f = doc["full_order"];
    if (!f.is_object())
      fail("full_order", "expected an object");
    reject_unknown(f, "full_order", {"segments"});
    if (f.contains("segments")) {
      cfg.full_order_segments = get_int(f["segments"], "full_order.segments");
      if (cfg.full_order_segments < 3)
        fail("full_order.segments", "must be at least 3");
    }
  }

  if (doc.contains("output"))
    cfg.output_dir = get_string(doc["output"], "output");
  if (doc.contains("workers")) {
    cfg.workers = get_int(doc["workers"], "workers");
    if (cfg.workers < 1)
      fail("workers", "must be at least 1");
  }
  if (doc.contains("deterministic"))
    cfg.deterministic = get_bool(doc["deterministic"], "deterministic");
  if (doc.contains("vtk"))
    cfg.export_vtk = get_bool(doc["vtk"], "vtk");
  return cfg;
}

std::string to_json(const RunConfig &cfg) {
  json doc;
  doc["problem"] = cfg.problem == ProblemId::Custom ? "CUSTOM" : to_string(cfg.problem);
  if (cfg.problem == ProblemId::Custom) {
    json c;
    const int dim = cfg.custom_domain.dim;
    json lo = json::array(), hi = json::array();
    for (int a = 0; a < dim; ++a) {
      lo.push_back(cfg.custom_domain.lower[a]);
      hi.push_back(cfg.custom_domain.upper[a]);
    }
    c["domain"] = {{"lower", lo}, {"upper", hi}};
    json incs = json::array();
    for (const auto &inc : cfg.custom_inclusions) {
      json j;
      if (inc.kind == Inclusion::Kind::Disk2D) {
        j["type"] = "disk";
        j["center"] = {inc.center[0], inc.center[1]};
      } else {
        j["type"] = "cylinder";
        j["axis"] = std::string(1, "xyz"[inc.axis]);
        j["center"] = {inc.center[0], inc.center[1], inc.center[2]};
        j["range"] = {inc.axial_lo, inc.axial_hi};
      }
      j["radius"] = inc.radius;
      incs.push_back(j);
    }
    c["inclusions"] = incs;
    c["g"] = cfg.custom_g;
    c["boundary"] = cfg.custom_boundary;
    c["f"] = cfg.custom_f;
    doc["custom"] = c;
  }
  doc["levels"] = cfg.levels;
  if (!cfg.epsilons.empty())
    doc["epsilons"] = cfg.epsilons;
  doc["orders"] = cfg.orders;
  doc["kappas"] = cfg.kappas;
  doc["method"] = to_string(cfg.method);
  doc["solver"] = {{"path", cfg.solver.path == SolverPath::Direct ? "direct" : "schur_cg"},
                   {"tol", cfg.solver.tolerance},
                   {"max_iterations", cfg.solver.max_iterations}};
  doc["full_order"] = {{"segments", cfg.full_order_segments}};
  doc["output"] = cfg.output_dir;
  doc["workers"] = cfg.workers;
  doc["deterministic"] = cfg.deterministic;
  doc["vtk"] = cfg.export_vtk;
  return doc.dump(2) + "\n";
}

ManufacturedProblem make_problem(const RunConfig &cfg) {
  if (cfg.problem == ProblemId::Custom)
    return make_custom_problem(cfg.custom_domain, cfg.custom_inclusions, cfg.custom_g, cfg.custom_boundary,
                               cfg.custom_f, !cfg.epsilons.empty());
  return make_problem(cfg.problem);
}

SweepSpec make_sweep_spec(const RunConfig &cfg) {
  SweepSpec s;
  s.levels = cfg.levels;
  s.orders = cfg.orders;
  s.kappas = cfg.kappas;
  s.method = cfg.method;
  if (!cfg.epsilons.empty()) {
    s.epsilons = cfg.epsilons;
  } else {
    // Custom problem without a radius sweep: keep the configured radii.
    s.epsilons = {cfg.custom_inclusions.front().radius};
  }
  return s;
}

RunOptions make_run_options(const RunConfig &cfg) {
  RunOptions o;
  o.solver = cfg.solver;
  o.full_order_segments = cfg.full_order_segments;
  return o;
}

} // namespace rlm
