#include "eigcorr/matrix_market.hpp"

#include "eigcorr/error.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace eigcorr {

void write_matrix_market(const CsrMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.n_rows() << ' ' << m.n_cols() << ' ' << m.nnz() << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < m.n_rows(); ++i) {
    const auto cols = m.row_cols(i);
    const auto vals = m.row_values(i);
    for (Index k = 0; k < cols.size(); ++k) {
      out << i + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
    }
  }
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw MissingFileError("cannot open file", path.string(), 0);
  }
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix coordinate real", 0) != 0) {
    throw MalformedLineError("expected a coordinate real MatrixMarket header", path.string(), 1);
  }
  ++line_no;
  const bool symmetric = line.find("symmetric") != std::string::npos;

  long long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') {
      continue;
    }
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
      throw MalformedLineError("bad size line", path.string(), line_no);
    }
    break;
  }
  std::vector<Triplet> triplets;
  long long seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') {
      continue;
    }
    std::istringstream ss(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> i >> j >> v)) {
      throw MalformedLineError("bad entry line", path.string(), line_no);
    }
    if (i < 1 || j < 1 || i > rows || j > cols) {
      throw IndexRangeError("entry index out of range", path.string(), line_no);
    }
    triplets.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v});
    if (symmetric && i != j) {
      triplets.push_back({static_cast<Index>(j - 1), static_cast<Index>(i - 1), v});
    }
    ++seen;
  }
  if (seen != nnz) {
    throw CountMismatchError("declared " + std::to_string(nnz) + " entries, found " +
                                 std::to_string(seen),
                             path.string(), line_no);
  }
  return CsrMatrix::from_triplets(static_cast<Index>(rows), static_cast<Index>(cols), triplets);
}

} // namespace eigcorr
