#include "eigcorr/eigensolvers.hpp"

#include "eigcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace eigcorr {

double rayleigh_quotient(const CsrMatrix& a, const CsrMatrix& b, std::span<const double> x) {
  if (a.n_rows() != x.size() || b.n_rows() != x.size()) {
    throw InvalidArgument("rayleigh_quotient: dimension mismatch");
  }
  const double denom = b.bilinear(x, x);
  if (!(denom > 0.0)) {
    throw DegenerateVector("rayleigh_quotient: x^T B x is not positive");
  }
  return a.bilinear(x, x) / denom;
}

double relative_residual(const CsrMatrix& a, const CsrMatrix& b, const EigenPair& pair) {
  Vector av = a * pair.vector;
  const Vector bv = b * pair.vector;
  const double scale_ref = norm2(av);
  axpy(-pair.value, bv, av);
  return scale_ref > 0.0 ? norm2(av) / scale_ref : norm2(av);
}

namespace {

// Householder reduction of symmetric v (overwritten by the orthogonal
// transform) to tridiagonal form with diagonal d and subdiagonal e.
void tridiagonalize(DenseMatrix& v, Vector& d, Vector& e) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
  }
  for (std::size_t i = n - 1; i > 0; --i) {
    double scale_sum = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) {
      scale_sum += std::abs(d[k]);
    }
    if (scale_sum == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale_sum;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) {
        g = -g;
      }
      e[i] = scale_sum * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] = 0.0;
      }
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) {
        e[j] -= hh * d[j];
      }
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) {
          v(k, j) -= (f * e[k] + g * d[k]);
        }
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) {
        d[k] = v(k, i + 1) / h;
      }
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) {
          g += v(k, i + 1) * v(k, j);
        }
        for (std::size_t k = 0; k <= i; ++k) {
          v(k, j) -= g * d[k];
        }
      }
    }
    for (std::size_t k = 0; k <= i; ++k) {
      v(k, i + 1) = 0.0;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e), accumulating rotations into v.
void tridiagonal_ql(DenseMatrix& v, Vector& d, Vector& e) {
  const std::size_t n = v.rows();
  for (std::size_t i = 1; i < n; ++i) {
    e[i - 1] = e[i];
  }
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) {
        break;
      }
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) {
          throw Error("dense_sym_eig: QL iteration did not converge");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) {
          r = -r;
        }
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) {
          d[i] -= h;
        }
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            h = v(k, ii + 1);
            v(k, ii + 1) = s * v(k, ii) + c * h;
            v(k, ii) = c * v(k, ii) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

// Solves L y = x in place (L lower triangular).
void forward_solve(const DenseMatrix& l, std::span<double> x) {
  for (std::size_t i = 0; i < l.rows(); ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) {
      s -= l(i, k) * x[k];
    }
    x[i] = s / l(i, i);
  }
}

// Solves L^T y = x in place.
void backward_solve_transposed(const DenseMatrix& l, std::span<double> x) {
  for (std::size_t i = l.rows(); i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < l.rows(); ++k) {
      s -= l(k, i) * x[k];
    }
    x[i] = s / l(i, i);
  }
}

} // namespace

std::vector<EigenPair> dense_sym_eig(const DenseMatrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("dense_sym_eig: matrix is not square");
  }
  const std::size_t n = a.rows();
  if (n == 0) {
    return {};
  }
  DenseMatrix v = a;
  Vector d(n), e(n);
  tridiagonalize(v, d, e);
  tridiagonal_ql(v, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  std::vector<EigenPair> pairs;
  pairs.reserve(n);
  for (std::size_t idx : order) {
    pairs.push_back({d[idx], v.column(idx)});
  }
  return pairs;
}

std::vector<EigenPair> dense_gen_eig_sym(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw InvalidArgument("dense_gen_eig_sym: matrices must be square and of equal size");
  }
  const std::size_t n = a.rows();
  const DenseMatrix l = cholesky(b);

  // C = L^{-1} A L^{-T}, built from W = L^{-1} A and C = L^{-1} W^T.
  DenseMatrix w(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector col = a.column(j);
    forward_solve(l, col);
    w.set_column(j, col);
  }
  DenseMatrix c(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector col(w.row(j).begin(), w.row(j).end());
    forward_solve(l, col);
    c.set_column(j, col);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = c(j, i) = s;
    }
  }

  auto pairs = dense_sym_eig(c);
  for (auto& p : pairs) {
    backward_solve_transposed(l, p.vector);
  }
  return pairs;
}

namespace {

// B-orthonormalises the columns in place with two passes of modified
// Gram-Schmidt. Columns that collapse are replaced by fresh random vectors.
void b_orthonormalize(std::vector<Vector>& cols, const CsrMatrix& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (int attempt = 0;; ++attempt) {
      const double norm_before = std::sqrt(std::max(b.bilinear(cols[j], cols[j]), 0.0));
      for (int pass = 0; pass < 2; ++pass) {
        const Vector bx = b * cols[j];
        for (std::size_t i = 0; i < j; ++i) {
          axpy(-dot(cols[i], bx), cols[i], cols[j]);
        }
      }
      const double norm_after = std::sqrt(std::max(b.bilinear(cols[j], cols[j]), 0.0));
      if (norm_after > 1e-10 * norm_before && norm_after > 0.0) {
        scale(1.0 / norm_after, cols[j]);
        break;
      }
      if (attempt > 5) {
        throw Error("smallest_eigenpairs: cannot build a B-orthonormal block");
      }
      for (double& x : cols[j]) {
        x = uniform(rng);
      }
    }
  }
}

} // namespace

std::vector<EigenPair> smallest_eigenpairs(const CsrMatrix& a, const CsrMatrix& b, int k,
                                           const EigenOptions& options, EigenStats* stats) {
  const Index n = a.n_rows();
  if (a.n_cols() != n || b.n_rows() != n || b.n_cols() != n) {
    throw InvalidArgument("smallest_eigenpairs: pencil matrices must be square and equal size");
  }
  if (k < 1 || static_cast<Index>(k) > n) {
    throw InvalidArgument("smallest_eigenpairs: k=" + std::to_string(k) + " outside 1.." +
                          std::to_string(n));
  }
  const std::size_t block = std::min<std::size_t>(n, static_cast<std::size_t>(k + std::max(options.guard, 0)));
  const std::size_t wanted = static_cast<std::size_t>(k);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<Vector> x(block, Vector(n));
  for (auto& col : x) {
    for (double& v : col) {
      v = uniform(rng);
    }
  }
  b_orthonormalize(x, b, rng);

  EigenStats local;
  Vector theta(block, 0.0);
  Vector theta_old(block, std::numeric_limits<double>::infinity());
  bool have_ritz = false;
  std::vector<Vector> y(block);
  std::vector<Vector> ay(block), by(block);

  for (int it = 1; it <= options.max_iter; ++it) {
    local.iterations = it;
    for (std::size_t j = 0; j < block; ++j) {
      const Vector rhs = b * x[j];
      Vector guess;
      if (have_ritz && theta[j] > 0.0) {
        guess = x[j];
        scale(1.0 / theta[j], guess);
      }
      CgResult solve = cg_solve(a, rhs, options.cg, guess);
      local.cg_iterations += solve.iterations;
      y[j] = std::move(solve.x);
    }
    b_orthonormalize(y, b, rng);

    DenseMatrix projected(block, block);
    for (std::size_t j = 0; j < block; ++j) {
      ay[j] = a * y[j];
      by[j] = b * y[j];
    }
    for (std::size_t i = 0; i < block; ++i) {
      for (std::size_t j = i; j < block; ++j) {
        projected(i, j) = projected(j, i) = 0.5 * (dot(y[i], ay[j]) + dot(y[j], ay[i]));
      }
    }
    const auto ritz = dense_sym_eig(projected);

    std::vector<Vector> ax(block, Vector(n, 0.0)), bx(block, Vector(n, 0.0));
    for (std::size_t j = 0; j < block; ++j) {
      x[j].assign(n, 0.0);
      for (std::size_t i = 0; i < block; ++i) {
        const double q = ritz[j].vector[i];
        axpy(q, y[i], x[j]);
        axpy(q, ay[i], ax[j]);
        axpy(q, by[i], bx[j]);
      }
      theta[j] = ritz[j].value;
    }
    have_ritz = true;

    bool converged = true;
    double worst = 0.0;
    for (std::size_t j = 0; j < wanted; ++j) {
      Vector r = ax[j];
      axpy(-theta[j], bx[j], r);
      const double ref = norm2(ax[j]);
      const double res = ref > 0.0 ? norm2(r) / ref : norm2(r);
      const double change = std::abs(theta[j] - theta_old[j]) / std::max(std::abs(theta[j]), 1e-300);
      worst = std::max(worst, res);
      if (!(res <= options.tol && change <= options.tol)) {
        converged = false;
      }
    }
    local.max_residual = worst;
    theta_old = theta;
    if (converged) {
      std::vector<EigenPair> out;
      out.reserve(wanted);
      for (std::size_t j = 0; j < wanted; ++j) {
        EigenPair pair{theta[j], std::move(x[j])};
        scale(1.0 / std::sqrt(b.bilinear(pair.vector, pair.vector)), pair.vector);
        fix_sign(pair.vector);
        out.push_back(std::move(pair));
      }
      if (stats) {
        *stats = local;
      }
      return out;
    }
  }
  if (stats) {
    *stats = local;
  }
  throw IterationLimit("smallest_eigenpairs: no convergence", local.iterations, local.max_residual);
}

} // namespace eigcorr
