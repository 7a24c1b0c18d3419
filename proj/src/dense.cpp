#include "eigcorr/dense.hpp"

#include "eigcorr/error.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace eigcorr {

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * y[i];
  }
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] += alpha * x[i];
  }
}

void scale(double alpha, std::span<double> x) {
  for (double& v : x) {
    v *= alpha;
  }
}

void fix_sign(std::span<double> x) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > best) {
      best = std::abs(x[i]);
      arg = i;
    }
  }
  if (!x.empty() && x[arg] < 0.0) {
    scale(-1.0, x);
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    m(i, i) = d[i];
  }
  return m;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    c[i] = (*this)(i, j);
  }
  return c;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> values) {
  assert(values.size() == rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    (*this)(i, j) = values[i];
  }
}

Vector DenseMatrix::operator*(std::span<const double> x) const {
  assert(x.size() == cols_);
  Vector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    y[i] = dot(row(i), x);
  }
  return y;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
  assert(cols_ == other.rows_);
  DenseMatrix c(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) {
        continue;
      }
      for (std::size_t j = 0; j < other.cols_; ++j) {
        c(i, j) += a * other(k, j);
      }
    }
  }
  return c;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      t(j, i) = (*this)(i, j);
    }
  }
  return t;
}

double DenseMatrix::asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i + 1; j < cols_; ++j) {
      m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    }
  }
  return m;
}

DenseMatrix cholesky(const DenseMatrix& a, double relative_pivot_tol) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("cholesky: matrix is not square");
  }
  const std::size_t n = a.rows();
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) {
      d -= l(j, k) * l(j, k);
    }
    if (!(d > relative_pivot_tol * std::abs(a(j, j)))) {
      throw NotSpd("cholesky: pivot " + std::to_string(j) + " is " + std::to_string(d) +
                   ", matrix is not numerically positive definite");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) {
        s -= l(i, k) * l(j, k);
      }
      l(i, j) = s / ljj;
    }
  }
  return l;
}

} // namespace eigcorr
