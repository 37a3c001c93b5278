#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "camg/sparse.hpp"

namespace camg {

/// MatrixMarket "coordinate real general", 1-based indices on disk.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// MatrixMarket "array real general" column vector.
void write_vector(const std::filesystem::path& path, std::span<const double> x);
std::vector<double> read_vector(const std::filesystem::path& path);

}  // namespace camg
