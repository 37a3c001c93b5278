#include "camg/smoothers.hpp"

#include <cmath>
#include <sstream>

#include "camg/vector.hpp"

namespace camg {

void PointSmootherConfig::validate() const {
    if (sweeps < 1) throw ConfigError("point smoother: sweeps must be at least 1");
    if (!(damping > 0.0 && damping < 2.0)) throw ConfigError("point smoother: damping must lie in (0, 2)");
}

Ilu0::Ilu0(const SparseMatrix& a) {
    require_dims(a.num_rows() == a.num_cols(), "ILU(0): matrix must be square");
    const index_t n = a.num_rows();
    const auto offsets = a.row_offsets();
    const auto cols = a.col_indices();
    std::vector<double> v(a.values().begin(), a.values().end());
    diag_pos_.assign(n, -1);
    for (index_t i = 0; i < n; ++i)
        for (index_t p = offsets[i]; p < offsets[i + 1]; ++p)
            if (cols[p] == i) diag_pos_[i] = p;

    std::vector<index_t> where(n, -1);
    for (index_t i = 0; i < n; ++i) {
        if (diag_pos_[i] < 0) throw SingularMatrixError("ILU(0): missing diagonal entry in row " + std::to_string(i));
        for (index_t p = offsets[i]; p < offsets[i + 1]; ++p) where[cols[p]] = p;
        for (index_t p = offsets[i]; p < offsets[i + 1] && cols[p] < i; ++p) {
            const index_t k = cols[p];
            v[p] /= v[diag_pos_[k]];
            for (index_t q = diag_pos_[k] + 1; q < offsets[k + 1]; ++q) {
                const index_t w = where[cols[q]];
                if (w >= 0) v[w] -= v[p] * v[q];
            }
        }
        for (index_t p = offsets[i]; p < offsets[i + 1]; ++p) where[cols[p]] = -1;
        if (v[diag_pos_[i]] == 0.0) throw SingularMatrixError("ILU(0): zero pivot in row " + std::to_string(i));
    }
    lu_ = SparseMatrix(n, n, std::vector<index_t>(offsets.begin(), offsets.end()),
                       std::vector<index_t>(cols.begin(), cols.end()), std::move(v));
}

void Ilu0::solve_in_place(std::span<double> x) const {
    const index_t n = lu_.num_rows();
    require_dims(static_cast<index_t>(x.size()) == n, "ILU(0): vector length mismatch");
    const auto offsets = lu_.row_offsets();
    const auto cols = lu_.col_indices();
    const auto v = lu_.values();
    for (index_t i = 0; i < n; ++i) {
        double s = x[i];
        for (index_t p = offsets[i]; p < diag_pos_[i]; ++p) s -= v[p] * x[cols[p]];
        x[i] = s;
    }
    for (index_t i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (index_t p = diag_pos_[i] + 1; p < offsets[i + 1]; ++p) s -= v[p] * x[cols[p]];
        x[i] = s / v[diag_pos_[i]];
    }
}

PointSmoother::PointSmoother(SparseMatrix a, PointSmootherConfig cfg) : a_(std::move(a)), cfg_(cfg) {
    cfg_.validate();
    require_dims(a_.num_rows() == a_.num_cols(), "PointSmoother: matrix must be square");
    switch (cfg_.kind) {
        case PointKind::jacobi:
        case PointKind::sgs: {
            const auto d = extract_diagonal(a_);
            inv_diag_.resize(d.size());
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (d[i] == 0.0)
                    throw SingularMatrixError("point smoother: zero diagonal in row " + std::to_string(i));
                inv_diag_[i] = 1.0 / d[i];
            }
            break;
        }
        case PointKind::ilu0: ilu_.emplace(a_); break;
        case PointKind::direct: lu_.emplace(a_.to_dense()); break;
    }
}

void PointSmoother::sgs_sweep(std::span<double> x, std::span<const double> b) const {
    const double w = cfg_.damping;
    const index_t n = a_.num_rows();
    auto relax = [&](index_t i) {
        const auto cols = a_.row_cols(i);
        const auto vals = a_.row_values(i);
        double s = b[i];
        for (std::size_t k = 0; k < cols.size(); ++k) s -= vals[k] * x[cols[k]];
        x[i] += w * s * inv_diag_[i];
    };
    for (index_t i = 0; i < n; ++i) relax(i);
    for (index_t i = n - 1; i >= 0; --i) relax(i);
}

void PointSmoother::smooth(std::span<double> x, std::span<const double> b) const {
    const index_t n = a_.num_rows();
    require_dims(static_cast<index_t>(x.size()) == n && static_cast<index_t>(b.size()) == n,
                 "PointSmoother: vector length mismatch");
    for (index_t s = 0; s < cfg_.sweeps; ++s) {
        if (cfg_.kind == PointKind::sgs) {
            sgs_sweep(x, b);
            continue;
        }
        auto r = residual(a_, x, b);
        switch (cfg_.kind) {
            case PointKind::jacobi:
                for (index_t i = 0; i < n; ++i) r[i] *= inv_diag_[i];
                break;
            case PointKind::ilu0: ilu_->solve_in_place(r); break;
            case PointKind::direct: lu_->solve_in_place(r); break;
            case PointKind::sgs: break;
        }
        axpy(cfg_.damping, r, x);
    }
}

void PointSmoother::solve(std::span<const double> b, std::span<double> x) const {
    std::fill(x.begin(), x.end(), 0.0);
    smooth(x, b);
}

std::vector<double> point_smooth(const PointSmootherConfig& cfg, const SparseMatrix& a, std::span<const double> x,
                                 std::span<const double> b) {
    PointSmoother s(a, cfg);
    std::vector<double> out(x.begin(), x.end());
    s.smooth(out, b);
    return out;
}

AHatMode BlockSmootherConfig::effective_a_hat_mode() const {
    switch (kind) {
        case BlockKind::braess_sarazin: return AHatMode::plain_diag;
        case BlockKind::simplec: return AHatMode::abs_rowsum;
        default: return a_hat_mode;
    }
}

void BlockSmootherConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("block smoother: alpha must be positive");
    if (outer_sweeps < 1) throw ConfigError("block smoother: sweeps must be at least 1");
    predictor.validate();
    corrector.validate();
}

BlockSmootherConfig BlockSmootherConfig::cheap_uzawa(double alpha, index_t sweeps) {
    return {BlockKind::uzawa, alpha, sweeps, {PointKind::sgs, 1, 0.7}, {PointKind::ilu0, 1, 1.0}, AHatMode::plain_diag};
}

BlockSmootherConfig BlockSmootherConfig::cheap_braess_sarazin(double alpha, index_t sweeps) {
    return {BlockKind::braess_sarazin, alpha, sweeps, {PointKind::jacobi, 1, 1.0}, {PointKind::ilu0, 1, 1.0},
            AHatMode::plain_diag};
}

BlockSmootherConfig BlockSmootherConfig::cheap_simplec(double alpha, index_t sweeps) {
    return {BlockKind::simplec, alpha, sweeps, {PointKind::sgs, 1, 0.7}, {PointKind::ilu0, 1, 1.0},
            AHatMode::abs_rowsum};
}

BlockSmootherConfig BlockSmootherConfig::cheap_simple(double alpha, index_t sweeps) {
    // alpha cancels in this variant, so the SGS damping is the only under-relaxation.
    return {BlockKind::simple, alpha, sweeps, {PointKind::sgs, 1, 0.7}, {PointKind::sgs, 1, 0.7},
            AHatMode::plain_diag};
}

BlockSmootherConfig BlockSmootherConfig::exact(BlockKind kind, double alpha, AHatMode mode) {
    return {kind, alpha, 1, {PointKind::direct, 1, 1.0}, {PointKind::direct, 1, 1.0}, mode};
}

std::string to_string(BlockKind kind) {
    switch (kind) {
        case BlockKind::uzawa: return "uzawa";
        case BlockKind::braess_sarazin: return "braess_sarazin";
        case BlockKind::simple: return "simple";
        case BlockKind::simplec: return "simplec";
    }
    return "?";
}

std::string to_string(PointKind kind) {
    switch (kind) {
        case PointKind::jacobi: return "jacobi";
        case PointKind::sgs: return "sgs";
        case PointKind::ilu0: return "ilu0";
        case PointKind::direct: return "direct";
    }
    return "?";
}

std::string to_string(AHatMode mode) {
    switch (mode) {
        case AHatMode::plain_diag: return "plain_diag";
        case AHatMode::abs_rowsum: return "abs_rowsum";
        case AHatMode::exact: return "exact";
    }
    return "?";
}

std::string describe(const BlockSmootherConfig& cfg) {
    std::ostringstream s;
    s << to_string(cfg.kind) << "(alpha=" << cfg.alpha << ", sweeps=" << cfg.outer_sweeps
      << ", a_hat=" << to_string(cfg.effective_a_hat_mode());
    if (cfg.kind != BlockKind::braess_sarazin)
        s << ", predictor=" << cfg.predictor.sweeps << "x" << to_string(cfg.predictor.kind) << "("
          << cfg.predictor.damping << ")";
    s << ", corrector=" << cfg.corrector.sweeps << "x" << to_string(cfg.corrector.kind) << "(" << cfg.corrector.damping
      << "))";
    return s.str();
}

namespace {

template <typename Enum>
Enum parse_enum(const KeyValueConfig& cfg, const std::string& key, Enum fallback,
                std::initializer_list<std::pair<const char*, Enum>> choices) {
    const std::string value = cfg.get_string(key, "");
    if (value.empty()) return fallback;
    std::string names;
    for (const auto& [name, e] : choices) {
        if (value == name) return e;
        names += names.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(cfg.where(key) + ": key '" + key + "': unknown value '" + value + "' (expected one of " +
                      names + ")");
}

PointSmootherConfig point_from_config(const KeyValueConfig& cfg, const std::string& prefix,
                                      const PointSmootherConfig& fallback) {
    PointSmootherConfig p;
    p.kind = parse_enum<PointKind>(cfg, prefix + "kind", fallback.kind,
                                   {{"jacobi", PointKind::jacobi},
                                    {"sgs", PointKind::sgs},
                                    {"ilu0", PointKind::ilu0},
                                    {"direct", PointKind::direct}});
    p.sweeps = cfg.get_int(prefix + "sweeps", fallback.sweeps);
    p.damping = cfg.get_double(prefix + "damping", fallback.damping);
    try {
        p.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(cfg.where(prefix + "sweeps") + ": " + prefix + ": " + e.what());
    }
    return p;
}

}  // namespace

BlockSmootherConfig block_smoother_from_config(const KeyValueConfig& cfg, const std::string& prefix,
                                               const BlockSmootherConfig& fallback) {
    const BlockKind kind = parse_enum<BlockKind>(cfg, prefix + "kind", fallback.kind,
                                                 {{"uzawa", BlockKind::uzawa},
                                                  {"braess_sarazin", BlockKind::braess_sarazin},
                                                  {"simple", BlockKind::simple},
                                                  {"simplec", BlockKind::simplec}});
    // Naming a different kind starts from that kind's Cheap preset.
    BlockSmootherConfig b = fallback;
    if (kind != fallback.kind) {
        switch (kind) {
            case BlockKind::uzawa: b = BlockSmootherConfig::cheap_uzawa(); break;
            case BlockKind::braess_sarazin: b = BlockSmootherConfig::cheap_braess_sarazin(); break;
            case BlockKind::simple: b = BlockSmootherConfig::cheap_simple(); break;
            case BlockKind::simplec: b = BlockSmootherConfig::cheap_simplec(); break;
        }
    }
    b.alpha = cfg.get_double(prefix + "alpha", b.alpha);
    b.outer_sweeps = cfg.get_int(prefix + "sweeps", b.outer_sweeps);
    b.a_hat_mode = parse_enum<AHatMode>(cfg, prefix + "a_hat", b.a_hat_mode,
                                        {{"plain_diag", AHatMode::plain_diag},
                                         {"abs_rowsum", AHatMode::abs_rowsum},
                                         {"exact", AHatMode::exact}});
    if (cfg.contains(prefix + "a_hat") && b.a_hat_mode != b.effective_a_hat_mode())
        throw ConfigError(cfg.where(prefix + "a_hat") + ": " + to_string(b.kind) + " requires a_hat=" +
                          to_string(b.effective_a_hat_mode()));
    b.predictor = point_from_config(cfg, prefix + "predictor.", b.predictor);
    b.corrector = point_from_config(cfg, prefix + "corrector.", b.corrector);
    try {
        b.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(cfg.where(prefix + "alpha") + ": " + e.what());
    }
    return b;
}

std::vector<double> SchurOperator::apply_a_hat_inv(std::span<const double> x) const {
    if (a_hat_lu) return a_hat_lu->solve(x);
    require_dims(x.size() == a_hat_inv_diag.size(), "SchurOperator: vector length mismatch");
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a_hat_inv_diag[i] * x[i];
    return y;
}

SchurOperator build_schur_from_diagonal(const SaddleOperator& op, std::vector<double> a_hat_inv_diag, double scale) {
    require_dims(static_cast<index_t>(a_hat_inv_diag.size()) == op.n_u(), "build_schur: diagonal length mismatch");
    SchurOperator s;
    s.S_tilde = add(op.Cz, matmul(op.B2, scale_rows(op.B1, a_hat_inv_diag)), scale, scale);
    s.a_hat_inv_diag = std::move(a_hat_inv_diag);
    return s;
}

SchurOperator build_schur(const SaddleOperator& op, AHatMode mode, double alpha, bool scale_with_alpha) {
    op.validate();
    const double scale = scale_with_alpha ? alpha : 1.0;
    if (mode == AHatMode::exact) {
        SchurOperator s;
        s.a_hat_lu = std::make_shared<const DenseLu>(op.K.to_dense());
        const DenseMatrix b1 = op.B1.to_dense();
        DenseMatrix kinv_b1(op.n_u(), op.n_lam());
        std::vector<double> col(op.n_u());
        for (index_t j = 0; j < op.n_lam(); ++j) {
            for (index_t i = 0; i < op.n_u(); ++i) col[i] = b1(i, j);
            s.a_hat_lu->solve_in_place(col);
            for (index_t i = 0; i < op.n_u(); ++i) kinv_b1(i, j) = col[i];
        }
        const DenseMatrix prod = dense_matmul(op.B2.to_dense(), kinv_b1);
        const DenseMatrix cz = op.Cz.to_dense();
        DenseMatrix st(op.n_lam(), op.n_lam());
        for (std::size_t k = 0; k < st.values.size(); ++k) st.values[k] = scale * (cz.values[k] + prod.values[k]);
        s.S_tilde = SparseMatrix::from_dense(st);
        return s;
    }
    const auto d = extract_diagonal(op.K, mode == AHatMode::abs_rowsum ? DiagonalMode::abs_rowsum : DiagonalMode::plain);
    std::vector<double> inv(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0.0) throw SingularMatrixError("build_schur: zero entry in the diagonal approximation, row " +
                                                   std::to_string(i));
        inv[i] = 1.0 / d[i];
    }
    return build_schur_from_diagonal(op, std::move(inv), scale);
}

BlockSmoother::BlockSmoother(std::shared_ptr<const SaddleOperator> op, BlockSmootherConfig cfg,
                             std::shared_ptr<const LinearSolver> predictor)
    : op_(std::move(op)), cfg_(cfg), predictor_(std::move(predictor)) {
    cfg_.validate();
    op_->validate();
    const AHatMode mode = cfg_.effective_a_hat_mode();
    switch (cfg_.kind) {
        case BlockKind::uzawa: schur_ = build_schur(*op_, mode, cfg_.alpha, false); break;
        case BlockKind::braess_sarazin: {
            // Cz + (1/alpha) B2 Ahat^-1 B1, i.e. the unscaled Schur form of alpha * Ahat.
            const auto d = extract_diagonal(op_->K);
            std::vector<double> inv(d.size());
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (d[i] == 0.0)
                    throw SingularMatrixError("Braess-Sarazin: zero diagonal in row " + std::to_string(i));
                inv[i] = 1.0 / (cfg_.alpha * d[i]);
            }
            schur_ = build_schur_from_diagonal(*op_, std::move(inv), 1.0);
            break;
        }
        case BlockKind::simple:
        case BlockKind::simplec: schur_ = build_schur(*op_, mode, cfg_.alpha, true); break;
    }
    if (!predictor_ && cfg_.kind != BlockKind::braess_sarazin)
        predictor_ = std::make_shared<PointSmoother>(op_->K, cfg_.predictor);
    if (predictor_) require_dims(predictor_->size() == op_->n_u(), "BlockSmoother: predictor size mismatch");
    corrector_ = std::make_shared<PointSmoother>(schur_.S_tilde, cfg_.corrector);
}

void BlockSmoother::smooth(BlockVector& x, const BlockVector& b) const {
    for (index_t s = 0; s < cfg_.outer_sweeps; ++s) sweep(x, b);
}

void BlockSmoother::sweep(BlockVector& x, const BlockVector& b) const {
    require_dims(static_cast<index_t>(x.u.size()) == op_->n_u() && static_cast<index_t>(x.lam.size()) == op_->n_lam() &&
                     static_cast<index_t>(b.u.size()) == op_->n_u() &&
                     static_cast<index_t>(b.lam.size()) == op_->n_lam(),
                 "BlockSmoother: vector length mismatch");
    switch (cfg_.kind) {
        case BlockKind::uzawa: uzawa(x, b); break;
        case BlockKind::braess_sarazin: braess_sarazin(x, b); break;
        case BlockKind::simple:
        case BlockKind::simplec: simple(x, b); break;
    }
}

namespace {

// b_u - K u - B1 lam
std::vector<double> momentum_residual(const SaddleOperator& op, const BlockVector& x, const BlockVector& b) {
    auto r = residual(op.K, x.u, b.u);
    spmv_add(op.B1, x.lam, r, -1.0);
    return r;
}

// b_lam + Cz lam - B2 u
std::vector<double> constraint_rhs(const SaddleOperator& op, std::span<const double> u, const BlockVector& x,
                                   const BlockVector& b) {
    auto r = residual(op.B2, u, b.lam);
    spmv_add(op.Cz, x.lam, r, 1.0);
    return r;
}

}  // namespace

void BlockSmoother::uzawa(BlockVector& x, const BlockVector& b) const {
    const auto r_u = momentum_residual(*op_, x, b);
    std::vector<double> du(op_->n_u());
    predictor_->solve(r_u, du);
    auto rhs = constraint_rhs(*op_, x.u, x, b);
    spmv_add(op_->B2, du, rhs, -1.0);
    for (double& v : rhs) v = -v;
    std::vector<double> dlam(op_->n_lam());
    corrector_->solve(rhs, dlam);
    axpy(cfg_.alpha, du, x.u);
    axpy(cfg_.alpha, dlam, x.lam);
}

void BlockSmoother::braess_sarazin(BlockVector& x, const BlockVector& b) const {
    // a_hat_inv_diag already holds (alpha Ahat)^-1.
    const auto r_u = momentum_residual(*op_, x, b);
    const auto step = schur_.apply_a_hat_inv(r_u);
    axpy(1.0, step, x.u);
    auto rhs = constraint_rhs(*op_, x.u, x, b);
    for (double& v : rhs) v = -v;
    std::vector<double> dlam(op_->n_lam());
    corrector_->solve(rhs, dlam);
    axpy(1.0, dlam, x.lam);
    axpy(-1.0, schur_.apply_a_hat_inv(spmv(op_->B1, dlam)), x.u);
}

void BlockSmoother::simple(BlockVector& x, const BlockVector& b) const {
    const auto r_u = momentum_residual(*op_, x, b);
    std::vector<double> du(op_->n_u());
    predictor_->solve(r_u, du);
    axpy(1.0, du, x.u);
    auto rhs = constraint_rhs(*op_, x.u, x, b);
    for (double& v : rhs) v = -v;
    std::vector<double> dlam(op_->n_lam());
    corrector_->solve(rhs, dlam);
    axpy(cfg_.alpha, dlam, x.lam);
    axpy(-cfg_.alpha, schur_.apply_a_hat_inv(spmv(op_->B1, dlam)), x.u);
}

namespace {

DenseMatrix dense_a_hat_inverse(const SaddleOperator& op, AHatMode mode) {
    if (mode == AHatMode::exact) return dense_inverse(op.K.to_dense());
    const auto d = extract_diagonal(op.K, mode == AHatMode::abs_rowsum ? DiagonalMode::abs_rowsum : DiagonalMode::plain);
    DenseMatrix inv(op.n_u(), op.n_u());
    for (index_t i = 0; i < op.n_u(); ++i) {
        if (d[i] == 0.0) throw SingularMatrixError("smoother_splitting: zero diagonal approximation");
        inv(i, i) = 1.0 / d[i];
    }
    return inv;
}

void place(DenseMatrix& dst, const DenseMatrix& src, index_t r0, index_t c0, double scale = 1.0) {
    for (index_t i = 0; i < src.num_rows; ++i)
        for (index_t j = 0; j < src.num_cols; ++j) dst(r0 + i, c0 + j) += scale * src(i, j);
}

}  // namespace

DenseMatrix smoother_splitting(const SaddleOperator& op, const BlockSmootherConfig& cfg) {
    op.validate();
    const index_t nu = op.n_u(), nl = op.n_lam();
    const double a = cfg.alpha;
    const AHatMode mode = cfg.effective_a_hat_mode();
    const DenseMatrix k = op.K.to_dense(), b1 = op.B1.to_dense(), b2 = op.B2.to_dense(), cz = op.Cz.to_dense();
    const DenseMatrix ahat_inv = dense_a_hat_inverse(op, mode);
    const DenseMatrix schur_core = [&] {  // Cz + B2 Ahat^-1 B1
        DenseMatrix s = dense_matmul(b2, dense_matmul(ahat_inv, b1));
        for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] += cz.values[i];
        return s;
    }();
    DenseMatrix m(nu + nl, nu + nl);
    switch (cfg.kind) {
        case BlockKind::uzawa:
            // (1/alpha) [[K, 0], [B2, -S]], S = Cz + B2 Ahat^-1 B1
            place(m, k, 0, 0, 1.0 / a);
            place(m, b2, nu, 0, 1.0 / a);
            place(m, schur_core, nu, nu, -1.0 / a);
            break;
        case BlockKind::braess_sarazin: {
            // [[alpha Ahat, B1], [B2, -Cz]]
            const DenseMatrix ahat = dense_inverse(ahat_inv);
            place(m, ahat, 0, 0, a);
            place(m, b1, 0, nu);
            place(m, b2, nu, 0);
            place(m, cz, nu, nu, -1.0);
            break;
        }
        case BlockKind::simple:
        case BlockKind::simplec: {
            // [[K, 0], [B2, -S]] [[I, Ahat^-1 B1], [0, I/alpha]], S = alpha (Cz + B2 Ahat^-1 B1)
            DenseMatrix lower(nu + nl, nu + nl), upper(nu + nl, nu + nl);
            place(lower, k, 0, 0);
            place(lower, b2, nu, 0);
            place(lower, schur_core, nu, nu, -a);
            place(upper, DenseMatrix::identity(nu), 0, 0);
            place(upper, dense_matmul(ahat_inv, b1), 0, nu);
            place(upper, DenseMatrix::identity(nl), nu, nu, 1.0 / a);
            m = dense_matmul(lower, upper);
            break;
        }
    }
    return m;
}

DenseMatrix error_matrix(const SaddleOperator& op, const BlockSmootherConfig& cfg) {
    return dense_subtract(op.merged().to_dense(), smoother_splitting(op, cfg));
}

}  // namespace camg
