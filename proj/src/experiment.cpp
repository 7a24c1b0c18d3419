#include "eigcorr/experiment.hpp"

#include "eigcorr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace eigcorr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

bool is_constant_coefficient(const std::string& name, double& value) {
  if (name == "one") {
    value = 1.0;
    return true;
  }
  const std::string t = trim(name);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  return ec == std::errc() && ptr == t.data() + t.size() && !t.empty();
}

SolverOptions solver_options(const RunConfig& config) {
  SolverOptions opts;
  opts.eigen.tol = config.tol;
  opts.eigen.cg.tol = config.cg_tol;
  opts.cg.tol = config.cg_tol;
  return opts;
}

TriMesh base_mesh(const RunConfig& config, int m) {
  if (config.mesh.empty()) {
    return unit_square_mesh(m);
  }
  return refine_regular(load_mesh(config.mesh), m);
}

int log2_exact(int m) {
  int q = 0;
  while ((1 << q) < m) {
    ++q;
  }
  return q;
}

struct Reference {
  ExactEigenpair exact;
  bool analytic = false;
};

// Analytic on the unit square with constant coefficients, otherwise a direct
// solve two refinements beyond the finest level of the largest run.
Reference make_reference(const RunConfig& config, int n_levels) {
  double a = 1.0;
  double rho = 1.0;
  Reference ref;
  if (config.mesh.empty() && is_constant_coefficient(config.diffusion, a) &&
      is_constant_coefficient(config.weight, rho)) {
    ref.exact = unit_square_reference(config.index, a, rho);
    ref.analytic = true;
    return ref;
  }
  int m = 0;
  for (int v : config.m) {
    m = std::max(m, v);
  }
  TriMesh mesh = base_mesh(config, m);
  int order = config.order;
  int refinements = 2;
  if (n_levels > 1) {
    if (config.way == Way::multigrid) {
      refinements += (n_levels - 1) * (config.mesh.empty() ? log2_exact(m) : config.refine_per_level);
    } else {
      order += n_levels - 1;
    }
  }
  FeSpace space(refine_regular(mesh, refinements), order);
  const Problem problem = make_problem(config);
  const CsrMatrix a_mat = apply_dirichlet(assemble_stiffness(space, problem.diffusion), space);
  const CsrMatrix b_mat = apply_dirichlet(assemble_mass(space, problem.weight), space);
  const SolverOptions opts = solver_options(config);
  const auto pairs = smallest_eigenpairs(a_mat, b_mat, config.index, opts.eigen);
  ref.exact.lambda = pairs.back().value;
  ref.exact.label = "direct P" + std::to_string(order) + " solve, " + std::to_string(refinements) +
                    " refinements beyond the base mesh (" + std::to_string(space.n_free()) +
                    " dofs)";
  return ref;
}

void check_min_max(const RunConfig& config, const Reference& ref, const CorrectionTrace& trace) {
  if (config.index != 1) {
    return;
  }
  const double bound = ref.exact.lambda * (1.0 - 1e-12);
  const double coarse = trace.records.front().lambda;
  for (const LevelRecord& rec : trace.records) {
    if (rec.lambda < bound) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "level " << rec.level + 1 << " eigenvalue " << rec.lambda
          << " is below the reference " << ref.exact.lambda;
      throw MinMaxViolation(msg.str());
    }
    if (rec.stage == "correction" && rec.lambda > coarse * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "augmented eigenvalue " << rec.lambda << " at level "
          << rec.level + 1 << " exceeds the coarse eigenvalue " << coarse;
      throw MinMaxViolation(msg.str());
    }
  }
}

ConvergenceRow row_from(const LevelRecord& rec, int level, double h_or_p) {
  ConvergenceRow row;
  row.level = level;
  row.h_or_p = h_or_p;
  row.dofs = rec.dofs;
  row.lambda = rec.lambda;
  row.err_lambda = rec.err_lambda;
  row.err_energy = rec.err_energy;
  row.err_l2 = rec.err_l2;
  row.wall_ms = rec.wall_ms;
  row.stage = rec.stage;
  return row;
}

std::optional<double> rate_between(const std::optional<double>& e0, const std::optional<double>& e1,
                                   double s0, double s1) {
  if (!e0 || !e1) {
    return std::nullopt;
  }
  const double errors[] = {*e0, *e1};
  const double sizes[] = {s0, s1};
  return estimate_rates(errors, sizes).front().slope;
}

void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double s0 = rows[k - 1].h_or_p;
    const double s1 = rows[k].h_or_p;
    if (s0 == s1) {
      continue;
    }
    rows[k].rate_lambda = rate_between(rows[k - 1].err_lambda, rows[k].err_lambda, s0, s1);
    rows[k].rate_energy = rate_between(rows[k - 1].err_energy, rows[k].err_energy, s0, s1);
  }
}

enum class Method { direct, two_grid, multilevel };

RunReport run(const RunConfig& config, Method method) {
  validate(config);
  if (method == Method::two_grid && config.levels < 2) {
    throw ConfigError("two-grid needs levels >= 2");
  }
  const int n_levels = method == Method::direct ? 1 : config.levels;
  const Reference ref = make_reference(config, n_levels);
  const SolverOptions opts = solver_options(config);
  const ExactEigenpair* exact = &ref.exact;

  RunReport report;
  report.method = method == Method::direct     ? "direct"
                  : method == Method::two_grid ? "two-grid"
                                               : "mlc";
  report.reference_label = ref.exact.label;
  report.reference_lambda = ref.exact.lambda;

  const bool sweep = config.m.size() > 1;
  for (int m : config.m) {
    const Hierarchy h = build_for(config, m, n_levels);
    const MultiLevelResult result = method == Method::two_grid
                                        ? two_grid_solve(h, config.index, opts, exact)
                                        : multi_level_solve(h, config.index, opts, exact);
    check_min_max(config, ref, result.trace);
    const auto& records = result.trace.records;
    if (sweep || method == Method::direct) {
      double wall = 0.0;
      for (const LevelRecord& rec : records) {
        wall += rec.wall_ms;
      }
      const double size = h.coarse().subdivisions > 0 ? 1.0 / h.coarse().subdivisions
                                                      : mesh_size(h.coarse().space.mesh());
      ConvergenceRow row = row_from(records.back(), static_cast<int>(h.n_levels()), size);
      row.wall_ms = wall;
      report.rows.push_back(row);
    } else {
      for (const LevelRecord& rec : records) {
        const double hp = config.way == Way::multispace ? rec.order : rec.h;
        report.rows.push_back(row_from(rec, static_cast<int>(rec.level) + 1, hp));
      }
    }
  }
  // Per-level multispace rows are indexed by order; a rate against p is not
  // the quantity of interest there.
  if (sweep || method == Method::direct || config.way == Way::multigrid) {
    fill_rates(report.rows);
  }
  return report;
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) {
    return {};
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string format_double(double v) { return format_optional(v); }

} // namespace

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file " + path.string());
  }
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": empty key");
    }
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_int("m", item));
  }
  if (out.empty()) {
    throw ConfigError("m: empty list");
  }
  return out;
}

void apply_config(const std::map<std::string, std::string>& values, RunConfig& config) {
  for (const auto& [key, value] : values) {
    if (key == "way") {
      try {
        config.way = parse_way(value);
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "m") {
      config.m = parse_int_list(value);
    } else if (key == "levels") {
      config.levels = parse_int(key, value);
    } else if (key == "index") {
      config.index = parse_int(key, value);
    } else if (key == "order") {
      config.order = parse_int(key, value);
    } else if (key == "tol") {
      config.tol = parse_double(key, value);
    } else if (key == "cg_tol") {
      config.cg_tol = parse_double(key, value);
    } else if (key == "out") {
      config.out = value;
    } else if (key == "mesh") {
      config.mesh = value;
    } else if (key == "refine_per_level") {
      config.refine_per_level = parse_int(key, value);
    } else if (key == "diffusion") {
      config.diffusion = value;
    } else if (key == "weight") {
      config.weight = value;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& config) {
  if (config.m.empty()) {
    throw ConfigError("m: at least one value required");
  }
  for (int m : config.m) {
    if (m < (config.mesh.empty() ? 1 : 0)) {
      throw ConfigError("m: values must be positive (refinement counts >= 0 with a mesh file)");
    }
  }
  if (config.levels < 1) {
    throw ConfigError("levels must be >= 1");
  }
  if (config.index < 1) {
    throw ConfigError("index must be >= 1");
  }
  if (config.order < 1 || config.order > 3) {
    throw ConfigError("order must be 1, 2 or 3");
  }
  if (!(config.tol > 0.0) || !(config.cg_tol > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  if (config.refine_per_level < 1) {
    throw ConfigError("refine_per_level must be >= 1");
  }
  if (config.way == Way::multispace && config.order + config.levels - 1 > 3) {
    throw ConfigError("multispace way reaches order " +
                      std::to_string(config.order + config.levels - 1) + ", above the P3 cap");
  }
  coefficient_preset(config.diffusion);
  coefficient_preset(config.weight);
}

CoefficientField coefficient_preset(const std::string& name) {
  double value = 0.0;
  if (is_constant_coefficient(name, value)) {
    if (!(value > 0.0)) {
      throw ConfigError("coefficient '" + name + "' must be positive");
    }
    return CoefficientField(value, name);
  }
  if (name == "bump") {
    return CoefficientField(
        [](Point p) {
          return 1.0 + 0.5 * std::sin(std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y);
        },
        4, name);
  }
  if (name == "linear") {
    return CoefficientField([](Point p) { return 1.0 + p.x; }, 1, name);
  }
  throw ConfigError("unknown coefficient '" + name + "' (expected one, bump, linear or a number)");
}

Problem make_problem(const RunConfig& config) {
  return Problem{coefficient_preset(config.diffusion), coefficient_preset(config.weight)};
}

Hierarchy build_for(const RunConfig& config, int m, int n_levels) {
  const Problem problem = make_problem(config);
  if (config.mesh.empty()) {
    return Hierarchy::build(config.way, m, n_levels, config.order, problem);
  }
  return Hierarchy::build_from_mesh(config.way, base_mesh(config, m), n_levels, config.order,
                                    config.refine_per_level, problem);
}

RunReport run_direct(const RunConfig& config) { return run(config, Method::direct); }
RunReport run_two_grid(const RunConfig& config) { return run(config, Method::two_grid); }
RunReport run_multilevel(const RunConfig& config) { return run(config, Method::multilevel); }

void write_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ConvergenceRow& r : rows) {
    out << r.level << ',' << format_double(r.h_or_p) << ',' << r.dofs << ','
        << format_double(r.lambda) << ',' << format_optional(r.err_lambda) << ','
        << format_optional(r.err_energy) << ',' << format_optional(r.err_l2) << ','
        << format_optional(r.rate_lambda) << ',' << format_optional(r.rate_energy) << ','
        << format_double(r.wall_ms) << '\n';
  }
}

void write_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  write_csv(rows, out);
  out.flush();
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

void print_summary(const RunReport& report, std::ostream& out) {
  out << "method: " << report.method << "\n";
  out << "reference: " << report.reference_label << "  lambda_ref = " << std::setprecision(15)
      << report.reference_lambda << "\n";
  auto cell = [](const std::optional<double>& v, int prec, bool fixed) {
    if (!v) {
      return std::string("-");
    }
    std::ostringstream s;
    if (fixed) {
      s << std::fixed;
    } else {
      s << std::scientific;
    }
    s << std::setprecision(prec) << *v;
    return s.str();
  };
  out << std::left << std::setw(6) << "level" << std::setw(12) << "h_or_p" << std::setw(10)
      << "dofs" << std::setw(20) << "lambda" << std::setw(12) << "err_lambda" << std::setw(12)
      << "err_energy" << std::setw(8) << "rate_l" << std::setw(8) << "rate_e" << std::setw(12)
      << "stage" << "wall_ms\n";
  for (const ConvergenceRow& r : report.rows) {
    out << std::left << std::setw(6) << r.level << std::setw(12) << std::setprecision(6)
        << std::defaultfloat << r.h_or_p << std::setw(10) << r.dofs << std::setw(20)
        << cell(r.lambda, 12, true) << std::setw(12) << cell(r.err_lambda, 3, false)
        << std::setw(12) << cell(r.err_energy, 3, false) << std::setw(8)
        << cell(r.rate_lambda, 2, true) << std::setw(8) << cell(r.rate_energy, 2, true)
        << std::setw(12) << r.stage << cell(r.wall_ms, 1, true) << "\n";
  }
}

} // namespace eigcorr
