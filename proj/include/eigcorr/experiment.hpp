#pragma once

#include "eigcorr/correction.hpp"
#include "eigcorr/hierarchy.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eigcorr {

/// One experiment. Coefficients are a positive number or a preset name
/// ("one", "bump", "linear", see coefficient_preset).
struct RunConfig {
  std::string diffusion = "1";
  std::string weight = "1";
  Way way = Way::multigrid;
  /// Base subdivisions; several values make a sweep with one row per value.
  /// With `mesh` set they are refinement counts of the imported mesh instead.
  std::vector<int> m{8};
  int levels = 2;
  int index = 1;
  int order = 1;
  double tol = 1e-10;
  double cg_tol = 1e-12;
  std::string out;
  /// Triangle-format mesh replacing the unit-square generator.
  std::string mesh;
  int refine_per_level = 2;
};

/// Flat key=value file; '#' starts a comment. Throws IoError or ConfigError.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Applies recognised keys to `config`; unknown keys throw ConfigError.
void apply_config(const std::map<std::string, std::string>& values, RunConfig& config);

/// Throws ConfigError when a field is out of range or the way/levels/order
/// combination cannot be built.
void validate(const RunConfig& config);

std::vector<int> parse_int_list(const std::string& text);

/// "one" (1), "bump" (1 + sin(pi x) sin(pi y) / 2), "linear" (1 + x), or a
/// positive constant.
CoefficientField coefficient_preset(const std::string& name);

Problem make_problem(const RunConfig& config);

struct ConvergenceRow {
  int level = 0;
  /// Mesh size for mesh-based rows, element order for multispace level rows.
  double h_or_p = 0.0;
  Index dofs = 0;
  double lambda = 0.0;
  std::optional<double> err_lambda;
  std::optional<double> err_energy;
  std::optional<double> err_l2;
  std::optional<double> rate_lambda;
  std::optional<double> rate_energy;
  double wall_ms = 0.0;
  std::string stage;
};

struct RunReport {
  std::string method;
  std::string reference_label;
  double reference_lambda = 0.0;
  std::vector<ConvergenceRow> rows;
};

RunReport run_direct(const RunConfig& config);
RunReport run_two_grid(const RunConfig& config);
RunReport run_multilevel(const RunConfig& config);

/// Hierarchy for one entry of the m list.
Hierarchy build_for(const RunConfig& config, int m, int n_levels);

inline constexpr const char* kCsvHeader =
    "level,h_or_p,dofs,lambda,err_lambda,err_energy,err_l2,rate_lambda,rate_energy,wall_ms";

void write_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);
/// Throws IoError if the file cannot be written.
void write_csv(const std::vector<ConvergenceRow>& rows, const std::filesystem::path& path);

void print_summary(const RunReport& report, std::ostream& out);

} // namespace eigcorr
