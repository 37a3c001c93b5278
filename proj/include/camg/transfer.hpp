#pragma once

#include <vector>

#include "camg/aggregation.hpp"
#include "camg/dense.hpp"
#include "camg/saddle.hpp"

namespace camg {

enum class NullSpaceKind { rigid_body_2d, constant_per_component };

struct NullSpace {
    DenseMatrix vectors;  // n_dofs x k
    NullSpaceKind kind = NullSpaceKind::rigid_body_2d;

    index_t num_vectors() const { return vectors.num_cols; }
};

/// Columns: x translation, y translation, in-plane rotation (-y, x).
NullSpace rigid_body_nullspace(const std::vector<Vec2>& coords);
/// One indicator column per component for nodes with `components` DOFs each.
NullSpace constant_nullspace(index_t num_nodes, index_t components);

struct TentativeProlongator {
    SparseMatrix P;
    NullSpace coarse_ns;
    NodeLayout coarse_layout;  // one coarse node per aggregate
    index_t dropped_columns = 0;
};

/// Per aggregate, the rows of ns on the aggregate's DOFs are orthonormalized
/// (modified Gram-Schmidt, one re-orthogonalization pass). Linearly dependent
/// columns are dropped locally. Unaggregated nodes get zero rows.
TentativeProlongator tentative_prolongator(const Aggregation& aggs, const NullSpace& ns, const NodeLayout& layout);

struct SmoothedProlongator {
    SparseMatrix P;
    double lambda_max = 0.0;
    double omega = 0.0;  // effective damping omega_in / lambda_max
};

/// Largest eigenvalue estimate of D^-1 A by power iteration from the all-ones vector.
double estimate_lambda_max(const SparseMatrix& a, index_t iterations = 10);

/// P = P_tent - (omega_in / lambda_max) D^-1 A P_tent with D the diagonal of A.
SmoothedProlongator smooth_prolongator(const SparseMatrix& p_tent, const SparseMatrix& a, double omega_in,
                                       index_t power_iterations = 10);

/// Segregated transfers: displacements and multipliers are never mixed.
struct BlockTransfer {
    SparseMatrix P_u;
    SparseMatrix R_u;
    SparseMatrix P_lam;
    SparseMatrix R_lam;

    BlockVector restrict_vector(const BlockVector& fine) const;
    BlockVector prolong(const BlockVector& coarse) const;
};

BlockTransfer build_block_transfer(SparseMatrix p_u, SparseMatrix p_lam);

/// Blockwise Galerkin product of each of the four blocks.
SaddleOperator coarsen_block(const SaddleOperator& op, const BlockTransfer& t);

}  // namespace camg
