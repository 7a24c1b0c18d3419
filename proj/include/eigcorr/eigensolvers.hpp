#pragma once

#include "eigcorr/cg.hpp"
#include "eigcorr/csr_matrix.hpp"
#include "eigcorr/dense.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace eigcorr {

/// Eigenvalue with its coefficient vector, normalised so v^T B v = 1.
struct EigenPair {
  double value = 0.0;
  Vector vector;
};

/// (x^T A x) / (x^T B x). Throws DegenerateVector if x^T B x <= 0.
double rayleigh_quotient(const CsrMatrix& a, const CsrMatrix& b, std::span<const double> x);

/// ||A v - lambda B v||_2 / ||A v||_2
double relative_residual(const CsrMatrix& a, const CsrMatrix& b, const EigenPair& pair);

/// Full spectrum of a dense symmetric matrix, ascending, orthonormal vectors.
/// Householder tridiagonalisation followed by implicit QL.
std::vector<EigenPair> dense_sym_eig(const DenseMatrix& a);

/// Full spectrum of the pencil (A, B), A symmetric and B SPD, ascending with
/// B-orthonormal vectors. Reduces to L^{-1} A L^{-T} through the Cholesky
/// factor of B; throws NotSpd when that factorization fails.
std::vector<EigenPair> dense_gen_eig_sym(const DenseMatrix& a, const DenseMatrix& b);

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 500;
  /// Extra block vectors beyond the k requested.
  int guard = 2;
  std::uint64_t seed = 20110123;
  CgOptions cg{};
};

struct EigenStats {
  int iterations = 0;
  long cg_iterations = 0;
  double max_residual = 0.0;
};

/// k smallest eigenpairs of the sparse SPD pencil (A, B).
///
/// Block inverse iteration: each sweep solves A Y = B X column by column with
/// CG, B-orthonormalises Y, and takes Ritz vectors of the projected pencil.
/// Converged when, for each of the k wanted pairs, the Ritz value changed by
/// less than `tol` relative and ||A x - theta B x|| <= tol ||A x||.
/// The random start block is seeded deterministically; each returned vector
/// has its largest-magnitude entry positive.
std::vector<EigenPair> smallest_eigenpairs(const CsrMatrix& a, const CsrMatrix& b, int k,
                                           const EigenOptions& options = {},
                                           EigenStats* stats = nullptr);

} // namespace eigcorr
