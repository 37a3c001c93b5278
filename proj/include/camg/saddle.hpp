#pragma once

#include "camg/sparse.hpp"
#include "camg/vector.hpp"

namespace camg {

/// The 2x2 block operator [[K, B1], [B2, -Cz]] acting on (u, lambda).
struct SaddleOperator {
    SparseMatrix K;   // n_u x n_u
    SparseMatrix B1;  // n_u x n_lam
    SparseMatrix B2;  // n_lam x n_u
    SparseMatrix Cz;  // n_lam x n_lam

    index_t n_u() const { return K.num_rows(); }
    index_t n_lam() const { return Cz.num_rows(); }
    index_t size() const { return n_u() + n_lam(); }
    index_t nnz() const { return K.nnz() + B1.nnz() + B2.nnz() + Cz.nnz(); }

    /// Throws DimensionError when the blocks do not fit together.
    void validate() const;

    BlockVector apply(const BlockVector& x) const;
    /// b - A x, blockwise.
    BlockVector residual(const BlockVector& x, const BlockVector& b) const;
    /// Second block row of the residual: b_lam - (B2 u - Cz lam).
    std::vector<double> constraint_residual(const BlockVector& x, std::span<const double> b_lam) const;

    /// Monolithic sparse matrix with the -Cz sign folded in.
    SparseMatrix merged() const;
};

struct SaddleSystem {
    SaddleOperator op;
    BlockVector rhs;
};

}  // namespace camg
