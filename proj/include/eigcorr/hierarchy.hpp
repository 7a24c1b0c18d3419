#pragma once

#include "eigcorr/assembly.hpp"
#include "eigcorr/csr_matrix.hpp"
#include "eigcorr/fe_space.hpp"

#include <string>
#include <vector>

namespace eigcorr {

/// How the finer spaces are obtained from the coarsest one.
enum class Way {
  /// Same element order on regularly refined meshes, h_k = H^k.
  multigrid,
  /// Same mesh, element order raised by one per level (P3 at most).
  multispace,
};

std::string to_string(Way way);
Way parse_way(const std::string& text);

/// Coefficients of a(u,v) = int diffusion grad u . grad v and
/// b(u,v) = int weight u v.
struct Problem {
  CoefficientField diffusion{1.0, "1"};
  CoefficientField weight{1.0, "1"};
};

/// One space of the chain with its Dirichlet-reduced pencil. All matrices
/// act on free dofs only.
struct Level {
  FeSpace space;
  CsrMatrix stiffness;
  CsrMatrix mass;
  /// From the previous level; empty on the coarsest level.
  CsrMatrix prolong_step;
  /// From the coarsest level (identity on the coarsest level).
  CsrMatrix prolong_coarse;
  /// prolong_coarse^T * {stiffness, mass} * prolong_coarse; empty on the
  /// coarsest level.
  DenseMatrix coarse_stiffness;
  DenseMatrix coarse_mass;
  /// m for an m x m structured unit-square mesh, 0 for other meshes.
  int subdivisions = 0;
};

/// Nested chain V_H = V_1 c V_2 c ... c V_n. Levels are 0-based in code.
class Hierarchy {
public:
  /// Unit-square chain on an m x m base mesh. Multigrid needs m = 2^q with
  /// q >= 1 and uses q (k-1) refinements for level k, so level k has
  /// m^k subdivisions. Multispace uses orders order, order+1, ... on one mesh.
  static Hierarchy build(Way way, int base_subdivisions, int n_levels, int order = 1,
                         const Problem& problem = {});

  /// Chain over an arbitrary base mesh; multigrid adds `refinements_per_level`
  /// regular refinements per level.
  static Hierarchy build_from_mesh(Way way, const TriMesh& base, int n_levels, int order,
                                   int refinements_per_level, const Problem& problem = {});

  /// Chain over explicitly given spaces; consecutive spaces must nest (equal
  /// spaces are allowed). Throws NestingViolation otherwise.
  static Hierarchy from_spaces(std::vector<FeSpace> spaces, Way way, const Problem& problem = {});

  std::size_t n_levels() const { return levels_.size(); }
  const Level& level(std::size_t k) const { return levels_.at(k); }
  const Level& coarse() const { return levels_.front(); }
  const Level& finest() const { return levels_.back(); }
  Way way() const { return way_; }
  const Problem& problem() const { return problem_; }

private:
  Hierarchy(Way way, Problem problem) : way_(way), problem_(std::move(problem)) {}
  void add_level(FeSpace space, int subdivisions);

  Way way_;
  Problem problem_;
  std::vector<Level> levels_;
};

} // namespace eigcorr
