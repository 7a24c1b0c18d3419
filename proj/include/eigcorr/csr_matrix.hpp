#pragma once

#include "eigcorr/dense.hpp"
#include "eigcorr/mesh.hpp"

#include <span>
#include <vector>

namespace eigcorr {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
class CsrMatrix {
public:
  CsrMatrix() = default;

  /// Takes ownership of raw CSR arrays; throws InvalidArgument if offsets are
  /// not monotone, columns are out of range or not strictly increasing.
  CsrMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
            std::vector<Index> col_indices, std::vector<double> values);

  /// Duplicates are summed in input order, so identical triplet lists give
  /// bit-identical matrices.
  static CsrMatrix from_triplets(Index rows, Index cols, std::span<const Triplet> triplets);
  static CsrMatrix identity(Index n);
  static CsrMatrix diagonal(std::span<const double> d);
  static CsrMatrix from_dense(const DenseMatrix& m, double drop_tol = 0.0);

  Index n_rows() const { return n_rows_; }
  Index n_cols() const { return n_cols_; }
  Index nnz() const { return values_.size(); }

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  std::span<const Index> row_cols(Index i) const {
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_values(Index i) const {
    return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  /// Stored value at (i, j), zero if not stored.
  double at(Index i, Index j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;
  /// y = A^T x
  Vector multiply_transpose(std::span<const double> x) const;

  CsrMatrix transpose() const;
  Vector diagonal_values() const;
  DenseMatrix to_dense() const;
  CsrMatrix submatrix(std::span<const Index> rows, std::span<const Index> cols) const;

  /// max |a_ij - a_ji| over stored entries.
  double asymmetry() const;

  /// x^T A y
  double bilinear(std::span<const double> x, std::span<const double> y) const;

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

private:
  Index n_rows_ = 0;
  Index n_cols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

/// Sparse product A * B.
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);

/// P^T A P as a dense matrix (A square, P tall).
DenseMatrix galerkin_product(const CsrMatrix& a, const CsrMatrix& p);

/// max |A_ij - B_ij| over the union of stored entries; shapes must agree.
double max_abs_difference(const CsrMatrix& a, const CsrMatrix& b);

} // namespace eigcorr
