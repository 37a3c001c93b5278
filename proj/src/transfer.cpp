#include "camg/transfer.hpp"

#include <cmath>

#include "camg/vector.hpp"

namespace camg {

NullSpace rigid_body_nullspace(const std::vector<Vec2>& coords) {
    const auto n = static_cast<index_t>(coords.size());
    NullSpace ns{DenseMatrix(2 * n, 3), NullSpaceKind::rigid_body_2d};
    for (index_t i = 0; i < n; ++i) {
        ns.vectors(2 * i, 0) = 1.0;
        ns.vectors(2 * i + 1, 1) = 1.0;
        ns.vectors(2 * i, 2) = -coords[i].y;
        ns.vectors(2 * i + 1, 2) = coords[i].x;
    }
    return ns;
}

NullSpace constant_nullspace(index_t num_nodes, index_t components) {
    NullSpace ns{DenseMatrix(num_nodes * components, components), NullSpaceKind::constant_per_component};
    for (index_t i = 0; i < num_nodes; ++i)
        for (index_t c = 0; c < components; ++c) ns.vectors(i * components + c, c) = 1.0;
    return ns;
}

TentativeProlongator tentative_prolongator(const Aggregation& aggs, const NullSpace& ns, const NodeLayout& layout) {
    require_dims(aggs.num_nodes() == layout.num_nodes(), "tentative_prolongator: aggregation does not match layout");
    require_dims(ns.vectors.num_rows == layout.num_dofs(), "tentative_prolongator: null space does not match layout");
    const index_t k = ns.num_vectors();

    std::vector<std::vector<index_t>> agg_dofs(aggs.num_aggs);
    std::vector<InterfaceTag> agg_tag(aggs.num_aggs, InterfaceTag::none);
    for (index_t node = 0; node < layout.num_nodes(); ++node) {
        const index_t a = aggs.node_to_agg[node];
        if (a == kUnassigned) continue;
        if (layout.interface[node] != InterfaceTag::none) agg_tag[a] = layout.interface[node];
        for (index_t d = layout.dof_begin(node); d < layout.dof_end(node); ++d) agg_dofs[a].push_back(d);
    }

    TentativeProlongator out;
    out.coarse_layout.node_offsets.assign(1, 0);
    std::vector<Triplet> p;
    std::vector<std::vector<double>> coarse_rows;
    for (index_t a = 0; a < aggs.num_aggs; ++a) {
        const auto& dofs = agg_dofs[a];
        if (dofs.empty()) throw SetupError("tentative_prolongator: aggregate " + std::to_string(a) + " is empty");
        const auto m = static_cast<index_t>(dofs.size());
        std::vector<std::vector<double>> q;  // retained orthonormal columns, length m
        for (index_t c = 0; c < k; ++c) {
            std::vector<double> v(m);
            for (index_t r = 0; r < m; ++r) v[r] = ns.vectors(dofs[r], c);
            const double original = norm2(v);
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& qj : q) axpy(-dot(qj, v), qj, v);
            const double remaining = norm2(v);
            if (original == 0.0 || remaining <= 1e-10 * original) {
                ++out.dropped_columns;
                continue;
            }
            for (double& x : v) x /= remaining;
            q.push_back(std::move(v));
        }
        if (q.empty()) throw SetupError("tentative_prolongator: aggregate " + std::to_string(a) + " has no null-space support");
        const index_t first = out.coarse_layout.num_dofs();
        for (std::size_t j = 0; j < q.size(); ++j) {
            for (index_t r = 0; r < m; ++r)
                if (q[j][r] != 0.0) p.push_back({dofs[r], first + static_cast<index_t>(j), q[j][r]});
            // Coarse null space row: R = Q^T ns on this aggregate.
            std::vector<double> row(k, 0.0);
            for (index_t c = 0; c < k; ++c)
                for (index_t r = 0; r < m; ++r) row[c] += q[j][r] * ns.vectors(dofs[r], c);
            coarse_rows.push_back(std::move(row));
        }
        out.coarse_layout.node_offsets.push_back(first + static_cast<index_t>(q.size()));
        out.coarse_layout.body.push_back(aggs.agg_body.empty() ? Body::slave : aggs.agg_body[a]);
        out.coarse_layout.interface.push_back(agg_tag[a]);
    }
    const index_t nc = out.coarse_layout.num_dofs();
    out.P = SparseMatrix::from_triplets(layout.num_dofs(), nc, std::move(p));
    out.coarse_ns.kind = ns.kind;
    out.coarse_ns.vectors = DenseMatrix(nc, k);
    for (index_t r = 0; r < nc; ++r)
        for (index_t c = 0; c < k; ++c) out.coarse_ns.vectors(r, c) = coarse_rows[r][c];
    return out;
}

double estimate_lambda_max(const SparseMatrix& a, index_t iterations) {
    require_dims(a.num_rows() == a.num_cols(), "estimate_lambda_max: matrix must be square");
    const auto diag = extract_diagonal(a);
    for (index_t i = 0; i < a.num_rows(); ++i)
        if (diag[i] == 0.0) throw SingularMatrixError("estimate_lambda_max: zero diagonal in row " + std::to_string(i));
    std::vector<double> v(a.num_rows(), 1.0), w(a.num_rows());
    double lambda = 0.0;
    for (index_t it = 0; it < iterations; ++it) {
        spmv(a, v, w);
        for (index_t i = 0; i < a.num_rows(); ++i) w[i] /= diag[i];
        const double nv = norm2(v), nw = norm2(w);
        if (nw == 0.0) return 0.0;
        lambda = nw / nv;
        for (index_t i = 0; i < a.num_rows(); ++i) v[i] = w[i] / nw;
    }
    return lambda;
}

SmoothedProlongator smooth_prolongator(const SparseMatrix& p_tent, const SparseMatrix& a, double omega_in,
                                       index_t power_iterations) {
    require_dims(a.num_rows() == a.num_cols() && a.num_cols() == p_tent.num_rows(),
                 "smooth_prolongator: operator does not match the prolongator");
    SmoothedProlongator out;
    if (omega_in == 0.0) {
        out.P = p_tent;
        return out;
    }
    out.lambda_max = estimate_lambda_max(a, power_iterations);
    if (!(out.lambda_max > 0.0)) throw SetupError("smooth_prolongator: spectral radius estimate is zero");
    out.omega = omega_in / out.lambda_max;
    const auto diag = extract_diagonal(a);
    std::vector<double> scale(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) scale[i] = out.omega / diag[i];
    out.P = add(p_tent, scale_rows(matmul(a, p_tent), scale), 1.0, -1.0);
    return out;
}

BlockVector BlockTransfer::restrict_vector(const BlockVector& fine) const {
    return {spmv(R_u, fine.u), spmv(R_lam, fine.lam)};
}

BlockVector BlockTransfer::prolong(const BlockVector& coarse) const {
    return {spmv(P_u, coarse.u), spmv(P_lam, coarse.lam)};
}

BlockTransfer build_block_transfer(SparseMatrix p_u, SparseMatrix p_lam) {
    BlockTransfer t;
    t.R_u = transpose(p_u);
    t.R_lam = transpose(p_lam);
    t.P_u = std::move(p_u);
    t.P_lam = std::move(p_lam);
    return t;
}

SaddleOperator coarsen_block(const SaddleOperator& op, const BlockTransfer& t) {
    require_dims(t.P_u.num_rows() == op.n_u() && t.P_lam.num_rows() == op.n_lam(),
                 "coarsen_block: transfer does not match the operator");
    SaddleOperator c;
    c.K = galerkin_triple(t.R_u, op.K, t.P_u);
    c.B1 = galerkin_triple(t.R_u, op.B1, t.P_lam);
    c.B2 = galerkin_triple(t.R_lam, op.B2, t.P_u);
    c.Cz = galerkin_triple(t.R_lam, op.Cz, t.P_lam);
    return c;
}

}  // namespace camg
