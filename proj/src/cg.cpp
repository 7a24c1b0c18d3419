#include "eigcorr/cg.hpp"

#include "eigcorr/error.hpp"

#include <cmath>

namespace eigcorr {

CgResult cg_solve(const CsrMatrix& a, std::span<const double> rhs, const CgOptions& options,
                  std::span<const double> initial_guess) {
  const Index n = a.n_rows();
  if (a.n_cols() != n || rhs.size() != n) {
    throw InvalidArgument("cg_solve: dimension mismatch");
  }
  if (!initial_guess.empty() && initial_guess.size() != n) {
    throw InvalidArgument("cg_solve: initial guess has wrong length");
  }

  CgResult result;
  result.x.assign(n, 0.0);
  const double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0) {
    return result;
  }
  if (!initial_guess.empty()) {
    result.x.assign(initial_guess.begin(), initial_guess.end());
  }

  Vector inv_diag = a.diagonal_values();
  for (double& d : inv_diag) {
    if (!(d > 0.0)) {
      throw NotSpd("cg_solve: non-positive diagonal entry");
    }
    d = 1.0 / d;
  }

  const int max_iter = options.max_iter > 0 ? options.max_iter : static_cast<int>(10 * n);
  const double target = options.tol * rhs_norm;

  Vector r(n), z(n), p(n), ap(n);
  auto true_residual = [&] {
    a.multiply(result.x, ap);
    for (Index i = 0; i < n; ++i) {
      r[i] = rhs[i] - ap[i];
    }
    return norm2(r);
  };

  double res = true_residual();
  int it = 0;
  while (res > target) {
    for (Index i = 0; i < n; ++i) {
      z[i] = inv_diag[i] * r[i];
    }
    p = z;
    double rz = dot(r, z);
    bool converged = false;
    while (it < max_iter) {
      a.multiply(p, ap);
      const double curvature = dot(p, ap);
      if (!(curvature > 0.0)) {
        throw NotSpd("cg_solve: non-positive curvature, matrix is not SPD");
      }
      const double alpha = rz / curvature;
      axpy(alpha, p, result.x);
      axpy(-alpha, ap, r);
      ++it;
      if (options.observer) {
        options.observer(it, result.x);
      }
      res = norm2(r);
      for (Index i = 0; i < n; ++i) {
        z[i] = inv_diag[i] * r[i];
      }
      const double rz_new = dot(r, z);
      if (options.keep_history) {
        result.residual_history.push_back(res);
        result.preconditioned_history.push_back(std::sqrt(rz_new));
      }
      if (res <= target) {
        converged = true;
        break;
      }
      const double beta = rz_new / rz;
      rz = rz_new;
      for (Index i = 0; i < n; ++i) {
        p[i] = z[i] + beta * p[i];
      }
    }
    res = true_residual();
    if (!converged || (res > target && it >= max_iter)) {
      if (res <= target) {
        break;
      }
      throw IterationLimit("cg_solve: no convergence", it, res / rhs_norm);
    }
  }
  result.iterations = it;
  result.relative_residual = res / rhs_norm;
  return result;
}

} // namespace eigcorr
