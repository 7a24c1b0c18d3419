#pragma once

#include "eigcorr/csr_matrix.hpp"

#include <functional>
#include <span>
#include <vector>

namespace eigcorr {

struct CgOptions {
  /// Stop when ||A x - b||_2 <= tol * ||b||_2 (true residual).
  double tol = 1e-12;
  /// 0 means 10 * n.
  int max_iter = 0;
  bool keep_history = false;
  /// Called with the iteration count and the current iterate after every update.
  std::function<void(int, std::span<const double>)> observer;
};

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
  /// Per iteration, when requested: recursive residual 2-norm and the
  /// energy-type quantity r^T M^{-1} r of the Jacobi-preconditioned residual.
  std::vector<double> residual_history;
  std::vector<double> preconditioned_history;
};

/// Jacobi-preconditioned conjugate gradients for SPD A.
///
/// Once the recursive residual meets the tolerance the true residual is
/// recomputed and the iteration restarted from the current iterate if it
/// drifted. Throws IterationLimit if the cap is reached and NotSpd on a
/// non-positive diagonal entry or curvature.
CgResult cg_solve(const CsrMatrix& a, std::span<const double> rhs, const CgOptions& options = {},
                  std::span<const double> initial_guess = {});

} // namespace eigcorr
