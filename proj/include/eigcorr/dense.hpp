#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eigcorr {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);

/// Flips the sign so the largest-magnitude entry (first one on ties) is positive.
void fix_sign(std::span<double> x);

/// Row-major dense matrix.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);

  std::span<const double> data() const { return data_; }

  Vector operator*(std::span<const double> x) const;
  DenseMatrix operator*(const DenseMatrix& other) const;
  DenseMatrix transpose() const;

  /// max |a_ij - a_ji|
  double asymmetry() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular L with L L^T = A. Throws NotSpd when a pivot is not
/// positive or falls below `relative_pivot_tol` times the corresponding
/// diagonal entry of A.
DenseMatrix cholesky(const DenseMatrix& a, double relative_pivot_tol = 1e-13);

} // namespace eigcorr
