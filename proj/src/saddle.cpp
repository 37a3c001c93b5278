#include "camg/saddle.hpp"

namespace camg {

void SaddleOperator::validate() const {
    const index_t nu = K.num_rows(), nl = Cz.num_rows();
    if (K.num_cols() != nu || Cz.num_cols() != nl || B1.num_rows() != nu || B1.num_cols() != nl ||
        B2.num_rows() != nl || B2.num_cols() != nu)
        throw_dimension("SaddleOperator: block dimensions are inconsistent");
}

BlockVector SaddleOperator::apply(const BlockVector& x) const {
    require_dims(static_cast<index_t>(x.u.size()) == n_u() && static_cast<index_t>(x.lam.size()) == n_lam(),
                 "SaddleOperator::apply: block vector size mismatch");
    BlockVector y(spmv(K, x.u), spmv(B2, x.u));
    spmv_add(B1, x.lam, y.u);
    spmv_add(Cz, x.lam, y.lam, -1.0);
    return y;
}

BlockVector SaddleOperator::residual(const BlockVector& x, const BlockVector& b) const {
    BlockVector r = apply(x);
    require_dims(r.u.size() == b.u.size() && r.lam.size() == b.lam.size(), "residual: rhs size mismatch");
    for (std::size_t i = 0; i < r.u.size(); ++i) r.u[i] = b.u[i] - r.u[i];
    for (std::size_t i = 0; i < r.lam.size(); ++i) r.lam[i] = b.lam[i] - r.lam[i];
    return r;
}

std::vector<double> SaddleOperator::constraint_residual(const BlockVector& x, std::span<const double> b_lam) const {
    std::vector<double> r = spmv(B2, x.u);
    spmv_add(Cz, x.lam, r, -1.0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b_lam[i] - r[i];
    return r;
}

SparseMatrix SaddleOperator::merged() const {
    validate();
    return merge_blocks(K, B1, B2, Cz.scaled(-1.0));
}

}  // namespace camg
