#pragma once

#include "eigcorr/csr_matrix.hpp"

#include <filesystem>

namespace eigcorr {

/// MatrixMarket "coordinate real general" text, 1-based, full precision.
void write_matrix_market(const CsrMatrix& m, const std::filesystem::path& path);
CsrMatrix read_matrix_market(const std::filesystem::path& path);

} // namespace eigcorr
