#include "eigcorr/hierarchy.hpp"

#include "eigcorr/error.hpp"

#include <memory>

namespace eigcorr {

std::string to_string(Way way) { return way == Way::multigrid ? "multigrid" : "multispace"; }

Way parse_way(const std::string& text) {
  if (text == "multigrid") {
    return Way::multigrid;
  }
  if (text == "multispace") {
    return Way::multispace;
  }
  throw InvalidArgument("unknown way '" + text + "', expected multigrid or multispace");
}

void Hierarchy::add_level(FeSpace space, int subdivisions) {
  Level level{std::move(space), {}, {}, {}, {}, {}, {}, subdivisions};
  level.stiffness = apply_dirichlet(assemble_stiffness(level.space, problem_.diffusion), level.space);
  level.mass = apply_dirichlet(assemble_mass(level.space, problem_.weight), level.space);
  if (levels_.empty()) {
    level.prolong_coarse = CsrMatrix::identity(level.space.n_free());
  } else {
    const FeSpace& prev = levels_.back().space;
    const FeSpace& base = levels_.front().space;
    level.prolong_step = reduce_prolongation(prolongation(prev, level.space), prev, level.space);
    level.prolong_coarse = reduce_prolongation(prolongation(base, level.space), base, level.space);
    level.coarse_stiffness = galerkin_product(level.stiffness, level.prolong_coarse);
    level.coarse_mass = galerkin_product(level.mass, level.prolong_coarse);
  }
  levels_.push_back(std::move(level));
}

Hierarchy Hierarchy::build(Way way, int base_subdivisions, int n_levels, int order,
                           const Problem& problem) {
  if (n_levels < 1) {
    throw InvalidArgument("build_hierarchy: need at least one level");
  }
  if (base_subdivisions < 1) {
    throw InvalidArgument("build_hierarchy: base subdivision count must be >= 1");
  }
  Hierarchy h(way, problem);
  auto mesh = std::make_shared<const TriMesh>(unit_square_mesh(base_subdivisions));

  if (way == Way::multigrid) {
    int log2m = 0;
    while ((1 << log2m) < base_subdivisions) {
      ++log2m;
    }
    if (n_levels > 1 && (base_subdivisions < 2 || (1 << log2m) != base_subdivisions)) {
      throw UnsupportedLadder("multigrid ladder h_k = H^k needs a dyadic H = 1/m with m = 2^q, q >= 1 "
                              "(e.g. m = 2, 4, 8, 16); got m = " +
                              std::to_string(base_subdivisions));
    }
    long long m = base_subdivisions;
    h.add_level(FeSpace(mesh, order), base_subdivisions);
    for (int k = 1; k < n_levels; ++k) {
      mesh = std::make_shared<const TriMesh>(refine_regular(*mesh, log2m));
      m *= base_subdivisions;
      h.add_level(FeSpace(mesh, order), static_cast<int>(m));
    }
  } else {
    if (order + n_levels - 1 > 3) {
      throw InvalidArgument("build_hierarchy: multispace way reaches order " +
                            std::to_string(order + n_levels - 1) + ", above the P3 cap");
    }
    for (int k = 0; k < n_levels; ++k) {
      h.add_level(FeSpace(mesh, order + k), base_subdivisions);
    }
  }
  return h;
}

Hierarchy Hierarchy::build_from_mesh(Way way, const TriMesh& base, int n_levels, int order,
                                     int refinements_per_level, const Problem& problem) {
  if (n_levels < 1) {
    throw InvalidArgument("build_hierarchy: need at least one level");
  }
  validate(base);
  Hierarchy h(way, problem);
  auto mesh = std::make_shared<const TriMesh>(base);
  if (way == Way::multigrid) {
    if (n_levels > 1 && refinements_per_level < 1) {
      throw UnsupportedLadder("multigrid ladder needs at least one refinement per level");
    }
    h.add_level(FeSpace(mesh, order), 0);
    for (int k = 1; k < n_levels; ++k) {
      mesh = std::make_shared<const TriMesh>(refine_regular(*mesh, refinements_per_level));
      h.add_level(FeSpace(mesh, order), 0);
    }
  } else {
    if (order + n_levels - 1 > 3) {
      throw InvalidArgument("build_hierarchy: multispace way is capped at P3");
    }
    for (int k = 0; k < n_levels; ++k) {
      h.add_level(FeSpace(mesh, order + k), 0);
    }
  }
  return h;
}

Hierarchy Hierarchy::from_spaces(std::vector<FeSpace> spaces, Way way, const Problem& problem) {
  if (spaces.empty()) {
    throw InvalidArgument("Hierarchy::from_spaces: no spaces given");
  }
  Hierarchy h(way, problem);
  for (auto& s : spaces) {
    h.add_level(std::move(s), 0);
  }
  return h;
}

} // namespace eigcorr
