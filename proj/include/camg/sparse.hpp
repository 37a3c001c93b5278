#pragma once

#include <span>
#include <vector>

#include "camg/common.hpp"
#include "camg/dense.hpp"

namespace camg {

struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing within
/// each row; values are immutable after construction.
class SparseMatrix {
public:
    SparseMatrix() : row_offsets_{0} {}

    /// Takes ownership of CSR arrays and validates every structural invariant.
    SparseMatrix(index_t num_rows, index_t num_cols, std::vector<index_t> row_offsets,
                 std::vector<index_t> col_indices, std::vector<double> values);

    /// Duplicate (row, col) entries are summed. Entries whose magnitude is
    /// at most drop_below are removed after summation (use a negative value to
    /// keep explicit zeros).
    static SparseMatrix from_triplets(index_t num_rows, index_t num_cols, std::vector<Triplet> triplets,
                                      double drop_below = -1.0);
    static SparseMatrix identity(index_t n);
    static SparseMatrix zero(index_t num_rows, index_t num_cols);
    static SparseMatrix diagonal(std::span<const double> d);
    static SparseMatrix from_dense(const DenseMatrix& a, double drop_below = 0.0);

    index_t num_rows() const { return num_rows_; }
    index_t num_cols() const { return num_cols_; }
    index_t nnz() const { return static_cast<index_t>(values_.size()); }

    std::span<const index_t> row_offsets() const { return row_offsets_; }
    std::span<const index_t> col_indices() const { return col_indices_; }
    std::span<const double> values() const { return values_; }

    std::span<const index_t> row_cols(index_t i) const {
        return col_indices().subspan(row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]);
    }
    std::span<const double> row_values(index_t i) const {
        return values().subspan(row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]);
    }

    /// Stored value at (i, j), or 0 when the entry is not stored.
    double at(index_t i, index_t j) const;

    DenseMatrix to_dense() const;
    SparseMatrix scaled(double s) const;

private:
    index_t num_rows_ = 0;
    index_t num_cols_ = 0;
    std::vector<index_t> row_offsets_;
    std::vector<index_t> col_indices_;
    std::vector<double> values_;
};

enum class DiagonalMode { plain, abs_rowsum };

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
/// y += alpha * A x
void spmv_add(const SparseMatrix& a, std::span<const double> x, std::span<double> y, double alpha = 1.0);
/// b - A x
std::vector<double> residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

SparseMatrix transpose(const SparseMatrix& a);
SparseMatrix matmul(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix galerkin_triple(const SparseMatrix& r, const SparseMatrix& a, const SparseMatrix& p);
/// alpha * A + beta * B
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0, double beta = 1.0);
/// diag(d) * A
SparseMatrix scale_rows(const SparseMatrix& a, std::span<const double> d);

std::vector<double> extract_diagonal(const SparseMatrix& a, DiagonalMode mode = DiagonalMode::plain);

/// Monolithic 2x2 block matrix [[a11, a12], [a21, a22]].
SparseMatrix merge_blocks(const SparseMatrix& a11, const SparseMatrix& a12, const SparseMatrix& a21,
                          const SparseMatrix& a22);

/// Largest absolute difference A - A^T (A square).
double asymmetry(const SparseMatrix& a);

}  // namespace camg
