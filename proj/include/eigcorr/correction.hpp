#pragma once

#include "eigcorr/eigensolvers.hpp"
#include "eigcorr/hierarchy.hpp"
#include "eigcorr/reference.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eigcorr {

/// Which eigenpair of the augmented space continues the chain.
enum class EigenSelection {
  /// The index-th smallest, the same index as the coarse solve.
  ith_smallest,
  /// The one whose eigenvalue is closest to the previous level's.
  closest_to_previous,
};

struct SolverOptions {
  EigenOptions eigen{};
  CgOptions cg{};
  EigenSelection selection = EigenSelection::ith_smallest;
};

struct StepStats {
  long cg_iterations = 0;
  int eigen_iterations = 0;
};

/// Per-level record of a correction run.
struct LevelRecord {
  std::size_t level = 0;
  /// "coarse", "correction", "final" or "fallback".
  std::string stage;
  int order = 1;
  int subdivisions = 0;
  double h = 0.0;
  Index dofs = 0;
  double lambda = 0.0;
  std::optional<double> err_lambda;
  std::optional<double> err_energy;
  std::optional<double> err_l2;
  long cg_iterations = 0;
  int eigen_iterations = 0;
  double wall_ms = 0.0;
};

struct CorrectionTrace {
  std::vector<LevelRecord> records;
};

struct MultiLevelResult {
  EigenPair pair;
  CorrectionTrace trace;
};

/// index-th (1-based) smallest eigenpair of the coarsest reduced pencil,
/// b-normalised with its largest entry positive.
EigenPair solve_coarse(const Hierarchy& hierarchy, int index, const SolverOptions& options = {},
                       StepStats* stats = nullptr);

/// Solves A_{k+1} u = lambda_k B_{k+1} (P u_k) for the pair living on level k.
/// The result is not normalised.
Vector source_correction(const Hierarchy& hierarchy, std::size_t level, const EigenPair& pair,
                         const SolverOptions& options = {}, StepStats* stats = nullptr);

/// Eigenpair of the pencil restricted to V_H + span{u_tilde}, mapped back to
/// the free dofs of `level`. Throws DegenerateAugmentation when u_tilde lies
/// numerically in V_H.
EigenPair augmented_eigensolve(const Hierarchy& hierarchy, std::size_t level,
                               std::span<const double> u_tilde, int index,
                               const SolverOptions& options = {},
                               double previous_lambda = std::numeric_limits<double>::quiet_NaN());

/// Source correction from `level` to `level + 1` followed by the augmented
/// eigensolve there.
EigenPair one_correction_step(const Hierarchy& hierarchy, std::size_t level, const EigenPair& pair,
                              int index, const SolverOptions& options = {},
                              StepStats* stats = nullptr);

/// Coarse solve, correction steps up to the second-to-last level, then a
/// final source solve and Rayleigh quotient on the finest level. A degenerate
/// augmentation falls back to the prolonged coarse eigenpair and is recorded
/// with stage "fallback". Errors are filled in when `reference` is given.
MultiLevelResult multi_level_solve(const Hierarchy& hierarchy, int index,
                                   const SolverOptions& options = {},
                                   const ExactEigenpair* reference = nullptr);

/// Baseline: coarse solve, one source solve on the finest level straight from
/// the coarse eigenpair, Rayleigh quotient. Intermediate levels are skipped.
MultiLevelResult two_grid_solve(const Hierarchy& hierarchy, int index,
                                const SolverOptions& options = {},
                                const ExactEigenpair* reference = nullptr);

/// |(lambda_hat - lambda) - [a(u-psi,u-psi) - lambda b(u-psi,u-psi)] / b(psi,psi)|
/// with lambda_hat the Rayleigh quotient of psi. Zero up to rounding when
/// (lambda, u) is an eigenpair of (A, B).
double rayleigh_expansion_residual(double lambda, std::span<const double> u,
                                   std::span<const double> psi, const CsrMatrix& a,
                                   const CsrMatrix& b);

} // namespace eigcorr
