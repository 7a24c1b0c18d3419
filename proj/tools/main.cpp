#include "eigcorr/error.hpp"
#include "eigcorr/experiment.hpp"
#include "eigcorr/matrix_market.hpp"
#include "eigcorr/mesh.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

enum Exit { kOk = 0, kConfig = 2, kSolver = 3, kIo = 4 };

struct Flags {
  std::string config;
  std::string way;
  std::string m;
  int levels = 0;
  int index = 0;
  int order = 0;
  double tol = 0.0;
  std::string out;
  std::string mesh;
  std::string dump_pencil;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key=value file; command-line flags override it");
  cmd->add_option("--way", f.way, "multigrid or multispace")
      ->check(CLI::IsMember({"multigrid", "multispace"}));
  cmd->add_option("--m", f.m, "base subdivisions, comma list for a sweep");
  cmd->add_option("--levels", f.levels, "number of levels n");
  cmd->add_option("--index", f.index, "eigenpair index i (1-based)");
  cmd->add_option("--order", f.order, "element order of the coarsest space")
      ->check(CLI::IsMember({1, 2, 3}));
  cmd->add_option("--tol", f.tol, "eigensolver tolerance");
  cmd->add_option("--out", f.out, "CSV output path");
  cmd->add_option("--mesh", f.mesh, "Triangle .node/.ele mesh instead of the unit square");
  cmd->add_option("--dump-pencil", f.dump_pencil,
                  "write the finest reduced A and B as <prefix>_A.mtx and <prefix>_B.mtx");
}

eigcorr::RunConfig resolve(const CLI::App* cmd, const Flags& f) {
  eigcorr::RunConfig config;
  if (!f.config.empty()) {
    eigcorr::apply_config(eigcorr::read_config_file(f.config), config);
  }
  std::map<std::string, std::string> overrides;
  auto given = [cmd](const char* name) { return cmd->get_option(name)->count() > 0; };
  if (given("--way")) overrides["way"] = f.way;
  if (given("--m")) overrides["m"] = f.m;
  if (given("--levels")) overrides["levels"] = std::to_string(f.levels);
  if (given("--index")) overrides["index"] = std::to_string(f.index);
  if (given("--order")) overrides["order"] = std::to_string(f.order);
  if (given("--out")) overrides["out"] = f.out;
  if (given("--mesh")) overrides["mesh"] = f.mesh;
  eigcorr::apply_config(overrides, config);
  if (given("--tol")) {
    config.tol = f.tol;
  }
  eigcorr::validate(config);
  return config;
}

void dump_pencil(const eigcorr::RunConfig& config, int n_levels, const std::string& prefix) {
  const eigcorr::Hierarchy h = eigcorr::build_for(config, config.m.back(), n_levels);
  eigcorr::write_matrix_market(h.finest().stiffness, prefix + "_A.mtx");
  eigcorr::write_matrix_market(h.finest().mass, prefix + "_B.mtx");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue solver with multi-level correction on triangular meshes"};
  app.require_subcommand(1);

  Flags direct_flags, two_grid_flags, mlc_flags;
  auto* direct = app.add_subcommand("direct", "fine eigensolve on each mesh of the sweep");
  auto* two_grid = app.add_subcommand("two-grid", "coarse eigensolve, one fine source solve");
  auto* mlc = app.add_subcommand("mlc", "multi-level correction");
  add_run_flags(direct, direct_flags);
  add_run_flags(two_grid, two_grid_flags);
  add_run_flags(mlc, mlc_flags);

  auto* mesh_cmd = app.add_subcommand("mesh", "mesh utilities");
  mesh_cmd->require_subcommand(1);
  int gen_m = 4;
  std::string gen_out;
  auto* gen = mesh_cmd->add_subcommand("gen", "structured unit-square mesh");
  gen->add_option("--m", gen_m, "subdivisions per side")->required();
  gen->add_option("--out", gen_out, "output base name (.node/.ele)")->required();
  std::string refine_in, refine_out;
  int refine_times = 1;
  auto* refine = mesh_cmd->add_subcommand("refine", "regular refinement of a mesh file");
  refine->add_option("--mesh", refine_in, "input mesh")->required();
  refine->add_option("--times", refine_times, "number of refinements")->check(CLI::NonNegativeNumber);
  refine->add_option("--out", refine_out, "output base name (.node/.ele)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (gen->parsed()) {
      eigcorr::save_mesh(eigcorr::unit_square_mesh(gen_m), gen_out);
      return kOk;
    }
    if (refine->parsed()) {
      eigcorr::save_mesh(eigcorr::refine_regular(eigcorr::load_mesh(refine_in), refine_times),
                         refine_out);
      return kOk;
    }

    CLI::App* cmd = direct->parsed() ? direct : two_grid->parsed() ? two_grid : mlc;
    const Flags& flags = direct->parsed() ? direct_flags : two_grid->parsed() ? two_grid_flags : mlc_flags;
    const eigcorr::RunConfig config = resolve(cmd, flags);
    const eigcorr::RunReport report = direct->parsed()     ? eigcorr::run_direct(config)
                                      : two_grid->parsed() ? eigcorr::run_two_grid(config)
                                                           : eigcorr::run_multilevel(config);
    eigcorr::print_summary(report, std::cout);
    if (!config.out.empty()) {
      eigcorr::write_csv(report.rows, config.out);
    }
    if (!flags.dump_pencil.empty()) {
      dump_pencil(config, direct->parsed() ? 1 : config.levels, flags.dump_pencil);
    }
    return kOk;
  } catch (const eigcorr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const eigcorr::UnsupportedLadder& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const eigcorr::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const eigcorr::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const eigcorr::ParseError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const eigcorr::Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  }
}
