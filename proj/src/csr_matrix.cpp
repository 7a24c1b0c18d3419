#include "eigcorr/csr_matrix.hpp"

#include "eigcorr/error.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace eigcorr {

CsrMatrix::CsrMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
                     std::vector<Index> col_indices, std::vector<double> values)
    : n_rows_(rows), n_cols_(cols), row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)), values_(std::move(values)) {
  if (row_offsets_.size() != n_rows_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != col_indices_.size() || col_indices_.size() != values_.size()) {
    throw InvalidArgument("CsrMatrix: inconsistent array sizes");
  }
  for (Index i = 0; i < n_rows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) {
      throw InvalidArgument("CsrMatrix: row offsets not monotone");
    }
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] >= n_cols_ ||
          (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])) {
        throw InvalidArgument("CsrMatrix: column indices out of range or unsorted in row " +
                              std::to_string(i));
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(Index rows, Index cols, std::span<const Triplet> triplets) {
  std::vector<Index> order(triplets.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const auto& ta = triplets[a];
    const auto& tb = triplets[b];
    return ta.row != tb.row ? ta.row < tb.row : ta.col < tb.col;
  });

  std::vector<Index> offsets(rows + 1, 0);
  std::vector<Index> cols_out;
  std::vector<double> vals;
  const Triplet* prev = nullptr;
  for (Index k : order) {
    const auto& t = triplets[k];
    if (t.row >= rows || t.col >= cols) {
      throw InvalidArgument("CsrMatrix::from_triplets: entry out of range");
    }
    if (prev && prev->row == t.row && prev->col == t.col) {
      vals.back() += t.value;
    } else {
      cols_out.push_back(t.col);
      vals.push_back(t.value);
      ++offsets[t.row + 1];
    }
    prev = &t;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return CsrMatrix(rows, cols, std::move(offsets), std::move(cols_out), std::move(vals));
}

CsrMatrix CsrMatrix::identity(Index n) {
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> d) {
  const Index n = d.size();
  std::vector<Index> offsets(n + 1);
  std::iota(offsets.begin(), offsets.end(), Index{0});
  std::vector<Index> cols(n);
  std::iota(cols.begin(), cols.end(), Index{0});
  return CsrMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(d.begin(), d.end()));
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& m, double drop_tol) {
  std::vector<Index> offsets{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > drop_tol) {
        cols.push_back(j);
        vals.push_back(m(i, j));
      }
    }
    offsets.push_back(cols.size());
  }
  return CsrMatrix(m.rows(), m.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

double CsrMatrix::at(Index i, Index j) const {
  const auto c = row_cols(i);
  const auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) {
    return 0.0;
  }
  return values_[row_offsets_[i] + static_cast<Index>(it - c.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  assert(x.size() == n_cols_ && y.size() == n_rows_);
  for (Index i = 0; i < n_rows_; ++i) {
    double s = 0.0;
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      s += values_[k] * x[col_indices_[k]];
    }
    y[i] = s;
  }
}

Vector CsrMatrix::operator*(std::span<const double> x) const {
  Vector y(n_rows_);
  multiply(x, y);
  return y;
}

Vector CsrMatrix::multiply_transpose(std::span<const double> x) const {
  assert(x.size() == n_rows_);
  Vector y(n_cols_, 0.0);
  for (Index i = 0; i < n_rows_; ++i) {
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      y[col_indices_[k]] += values_[k] * x[i];
    }
  }
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Index> offsets(n_cols_ + 1, 0);
  for (Index c : col_indices_) {
    ++offsets[c + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<Index> cols(nnz());
  std::vector<double> vals(nnz());
  std::vector<Index> cursor(offsets.begin(), offsets.end() - 1);
  for (Index i = 0; i < n_rows_; ++i) {
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const Index dst = cursor[col_indices_[k]]++;
      cols[dst] = i;
      vals[dst] = values_[k];
    }
  }
  return CsrMatrix(n_cols_, n_rows_, std::move(offsets), std::move(cols), std::move(vals));
}

Vector CsrMatrix::diagonal_values() const {
  Vector d(std::min(n_rows_, n_cols_), 0.0);
  for (Index i = 0; i < d.size(); ++i) {
    d[i] = at(i, i);
  }
  return d;
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix m(n_rows_, n_cols_);
  for (Index i = 0; i < n_rows_; ++i) {
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      m(i, col_indices_[k]) = values_[k];
    }
  }
  return m;
}

CsrMatrix CsrMatrix::submatrix(std::span<const Index> rows, std::span<const Index> cols) const {
  constexpr Index none = static_cast<Index>(-1);
  std::vector<Index> col_map(n_cols_, none);
  for (Index j = 0; j < cols.size(); ++j) {
    if (cols[j] >= n_cols_) {
      throw InvalidArgument("submatrix: column index out of range");
    }
    col_map[cols[j]] = j;
  }
  std::vector<Index> offsets{0};
  std::vector<Index> out_cols;
  std::vector<double> out_vals;
  std::vector<std::pair<Index, double>> row_buf;
  for (Index r : rows) {
    if (r >= n_rows_) {
      throw InvalidArgument("submatrix: row index out of range");
    }
    row_buf.clear();
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      if (const Index j = col_map[col_indices_[k]]; j != none) {
        row_buf.emplace_back(j, values_[k]);
      }
    }
    std::sort(row_buf.begin(), row_buf.end());
    for (const auto& [j, v] : row_buf) {
      out_cols.push_back(j);
      out_vals.push_back(v);
    }
    offsets.push_back(out_cols.size());
  }
  return CsrMatrix(rows.size(), cols.size(), std::move(offsets), std::move(out_cols),
                   std::move(out_vals));
}

double CsrMatrix::asymmetry() const {
  double m = 0.0;
  for (Index i = 0; i < n_rows_; ++i) {
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const Index j = col_indices_[k];
      const double other = j < n_rows_ && i < n_cols_ ? at(j, i) : 0.0;
      m = std::max(m, std::abs(values_[k] - other));
    }
  }
  return m;
}

double CsrMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
  assert(x.size() == n_rows_ && y.size() == n_cols_);
  double s = 0.0;
  for (Index i = 0; i < n_rows_; ++i) {
    double r = 0.0;
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      r += values_[k] * y[col_indices_[k]];
    }
    s += x[i] * r;
  }
  return s;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.n_cols() != b.n_rows()) {
    throw InvalidArgument("multiply: dimension mismatch");
  }
  constexpr Index none = static_cast<Index>(-1);
  std::vector<Index> offsets{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<double> acc(b.n_cols(), 0.0);
  std::vector<Index> marker(b.n_cols(), none);
  std::vector<Index> touched;
  for (Index i = 0; i < a.n_rows(); ++i) {
    touched.clear();
    const auto ac = a.row_cols(i);
    const auto av = a.row_values(i);
    for (Index p = 0; p < ac.size(); ++p) {
      const auto bc = b.row_cols(ac[p]);
      const auto bv = b.row_values(ac[p]);
      for (Index q = 0; q < bc.size(); ++q) {
        if (marker[bc[q]] != i) {
          marker[bc[q]] = i;
          acc[bc[q]] = 0.0;
          touched.push_back(bc[q]);
        }
        acc[bc[q]] += av[p] * bv[q];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index j : touched) {
      cols.push_back(j);
      vals.push_back(acc[j]);
    }
    offsets.push_back(cols.size());
  }
  return CsrMatrix(a.n_rows(), b.n_cols(), std::move(offsets), std::move(cols), std::move(vals));
}

DenseMatrix galerkin_product(const CsrMatrix& a, const CsrMatrix& p) {
  const CsrMatrix ap = multiply(a, p);
  const CsrMatrix pt = p.transpose();
  const CsrMatrix ptap = multiply(pt, ap);
  DenseMatrix out = ptap.to_dense();
  // Exact symmetry for symmetric A: average mirrored entries.
  if (a.n_rows() == a.n_cols()) {
    for (Index i = 0; i < out.rows(); ++i) {
      for (Index j = i + 1; j < out.cols(); ++j) {
        const double s = 0.5 * (out(i, j) + out(j, i));
        out(i, j) = out(j, i) = s;
      }
    }
  }
  return out;
}

double max_abs_difference(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols()) {
    throw InvalidArgument("max_abs_difference: shape mismatch");
  }
  double m = 0.0;
  for (Index i = 0; i < a.n_rows(); ++i) {
    for (Index k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
      m = std::max(m, std::abs(a.values()[k] - b.at(i, a.col_indices()[k])));
    }
    for (Index k = b.row_offsets()[i]; k < b.row_offsets()[i + 1]; ++k) {
      m = std::max(m, std::abs(b.values()[k] - a.at(i, b.col_indices()[k])));
    }
  }
  return m;
}

} // namespace eigcorr
