#pragma once

#include <span>
#include <vector>

#include "camg/common.hpp"

namespace camg {

/// Row-major dense matrix. Used for near-kernel blocks, coarse direct solves
/// and error-matrix oracles.
struct DenseMatrix {
    index_t num_rows = 0;
    index_t num_cols = 0;
    std::vector<double> values;

    DenseMatrix() = default;
    DenseMatrix(index_t rows, index_t cols) : num_rows(rows), num_cols(cols), values(rows * cols, 0.0) {}

    static DenseMatrix identity(index_t n);

    double& operator()(index_t i, index_t j) { return values[i * num_cols + j]; }
    double operator()(index_t i, index_t j) const { return values[i * num_cols + j]; }

    std::span<double> row(index_t i) { return {values.data() + i * num_cols, static_cast<std::size_t>(num_cols)}; }
    std::span<const double> row(index_t i) const {
        return {values.data() + i * num_cols, static_cast<std::size_t>(num_cols)};
    }
};

DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix dense_transpose(const DenseMatrix& a);
DenseMatrix dense_subtract(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> dense_matvec(const DenseMatrix& a, std::span<const double> x);
double dense_max_abs(const DenseMatrix& a);

/// LU factorization with partial pivoting, factored once and reused.
class DenseLu {
public:
    DenseLu() = default;
    explicit DenseLu(DenseMatrix a);

    index_t size() const { return lu_.num_rows; }
    std::vector<double> solve(std::span<const double> b) const;
    void solve_in_place(std::span<double> x) const;

private:
    DenseMatrix lu_;
    std::vector<index_t> pivots_;
};

std::vector<double> dense_lu_solve(const DenseMatrix& a, std::span<const double> b);
DenseMatrix dense_inverse(const DenseMatrix& a);

}  // namespace camg
