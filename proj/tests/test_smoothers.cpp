#include <doctest.h>

#include <random>

#include "camg/smoothers.hpp"
#include "test_support.hpp"

using namespace camg;
using camg::test::max_abs;
using camg::test::to_eigen;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Blocks {
    MatrixXd K, B1, B2, Cz;
};

Blocks blocks(const SaddleOperator& op) { return {to_eigen(op.K), to_eigen(op.B1), to_eigen(op.B2), to_eigen(op.Cz)}; }

MatrixXd assemble(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c, const MatrixXd& d) {
    MatrixXd m(a.rows() + c.rows(), a.cols() + b.cols());
    m << a, b, c, d;
    return m;
}

MatrixXd a_hat(const MatrixXd& k, AHatMode mode) {
    if (mode == AHatMode::exact) return k;
    if (mode == AHatMode::abs_rowsum) return k.cwiseAbs().rowwise().sum().asDiagonal();
    return k.diagonal().asDiagonal();
}

// Defining splitting matrix of each smoother, written out from block algebra.
MatrixXd defining_m(const SaddleOperator& op, BlockKind kind, double alpha, AHatMode mode) {
    const Blocks b = blocks(op);
    const auto nu = b.K.rows(), nl = b.Cz.rows();
    const MatrixXd ah = a_hat(b.K, mode), ahi = ah.inverse();
    const MatrixXd s = b.Cz + b.B2 * ahi * b.B1;
    const MatrixXd zu = MatrixXd::Zero(nu, nl), il = MatrixXd::Identity(nl, nl);
    switch (kind) {
        case BlockKind::uzawa: return assemble(b.K, zu, b.B2, -s) / alpha;
        case BlockKind::braess_sarazin: return assemble(alpha * ah, b.B1, b.B2, -b.Cz);
        case BlockKind::simple:
        case BlockKind::simplec:
            return assemble(b.K, zu, b.B2, -alpha * s) *
                   assemble(MatrixXd::Identity(nu, nu), ahi * b.B1, zu.transpose(), il / alpha);
    }
    return {};
}

BlockVector split(const VectorXd& v, index_t nu) {
    BlockVector x;
    x.u = test::to_std(v.head(nu));
    x.lam = test::to_std(v.tail(v.size() - nu));
    return x;
}

// M^-1 extracted column by column from one actual sweep started at zero.
MatrixXd sweep_inverse(const BlockSmoother& sm) {
    const index_t nu = sm.op().n_u(), n = sm.op().size();
    MatrixXd minv(n, n);
    for (index_t j = 0; j < n; ++j) {
        BlockVector x = split(VectorXd::Zero(n), nu);
        const BlockVector b = split(VectorXd::Unit(n, j), nu);
        sm.sweep(x, b);
        minv.col(j) = to_eigen(x.merged());
    }
    return minv;
}

std::shared_ptr<const SaddleOperator> shared(SaddleOperator op) {
    return std::make_shared<const SaddleOperator>(std::move(op));
}

MatrixXd tri_lower(std::mt19937& rng, index_t n) {
    MatrixXd m = MatrixXd::Zero(n, n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (index_t i = 0; i < n; ++i) {
        for (index_t j = 0; j < i; ++j)
            if ((i + j) % 3 == 0) m(i, j) = u(rng);
        m(i, i) = 2.0 + u(rng);
    }
    return m;
}

}  // namespace

TEST_CASE("point smoothers") {
    SUBCASE("identity matrix gives x = b in one sweep") {
        const std::vector<double> b{1.0, -2.0, 3.0};
        for (PointKind k : {PointKind::jacobi, PointKind::sgs, PointKind::ilu0, PointKind::direct}) {
            const PointSmoother s(SparseMatrix::identity(3), {k, 1, 1.0});
            std::vector<double> x(3, 0.0);
            s.solve(b, x);
            CHECK(x == b);
        }
    }
    SUBCASE("SGS on a 2x2 SPD matrix reduces the residual every sweep") {
        const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}});
        const std::vector<double> b{1.0, 1.0};
        std::vector<double> x{0.0, 0.0};
        double last = norm2(residual(a, x, b));
        for (int k = 0; k < 8; ++k) {
            x = point_smooth({PointKind::sgs, 1, 1.0}, a, x, b);
            const double now = norm2(residual(a, x, b));
            CHECK(now < last);
            last = now;
        }
        // Forward then backward Gauss-Seidel from zero, traced by hand.
        const auto once = point_smooth({PointKind::sgs, 1, 1.0}, a, std::vector<double>{0, 0}, b);
        CHECK(once[1] == doctest::Approx(0.25));
        CHECK(once[0] == doctest::Approx(0.375));
    }
    SUBCASE("damped Jacobi matches its formula") {
        std::mt19937 rng(3);
        const SaddleOperator op = test::random_saddle(rng, 10, 2);
        const auto x0 = test::random_vector(rng, 10), b = test::random_vector(rng, 10);
        const auto x = point_smooth({PointKind::jacobi, 1, 0.6}, op.K, x0, b);
        const MatrixXd k = to_eigen(op.K);
        const VectorXd expected =
            to_eigen(x0) + 0.6 * k.diagonal().cwiseInverse().asDiagonal() * (to_eigen(b) - k * to_eigen(x0));
        CHECK((to_eigen(x) - expected).cwiseAbs().maxCoeff() <= 1e-14);
    }
    SUBCASE("ILU(0) on triangular patterns is exact") {
        std::mt19937 rng(4);
        const MatrixXd l = tri_lower(rng, 15);
        for (const MatrixXd& m : {l, MatrixXd(l.transpose())}) {
            const Ilu0 ilu(test::from_eigen(m));
            const VectorXd b = VectorXd::Random(15);
            auto x = test::to_std(b);
            ilu.solve_in_place(x);
            CHECK((m * to_eigen(x) - b).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    SUBCASE("ILU(0) factors keep the pattern and match A on it") {
        std::mt19937 rng(6);
        const SparseMatrix a = add(test::random_sparse(rng, 20, 20, 0.2), SparseMatrix::identity(20), 1.0, 5.0);
        const Ilu0 ilu(a);
        CHECK(ilu.factors().col_indices().size() == a.col_indices().size());
        const MatrixXd f = to_eigen(ilu.factors());
        const MatrixXd lower = MatrixXd(f.triangularView<Eigen::StrictlyLower>()) + MatrixXd::Identity(20, 20);
        const MatrixXd upper = f.triangularView<Eigen::Upper>();
        const MatrixXd lu = lower * upper, ae = to_eigen(a);
        for (index_t i = 0; i < 20; ++i)
            for (index_t j : a.row_cols(i)) CHECK(std::abs(lu(i, j) - ae(i, j)) <= 1e-12);
    }
    SUBCASE("zero pivots are reported") {
        const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 0.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
        CHECK_THROWS_AS(Ilu0{a}, SingularMatrixError);
        CHECK_THROWS_AS(PointSmoother(a, {PointKind::sgs, 1, 1.0}), SingularMatrixError);
        const SparseMatrix no_diag = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
        CHECK_THROWS_AS(Ilu0{no_diag}, SingularMatrixError);
    }
    CHECK_THROWS_AS((PointSmootherConfig{PointKind::sgs, 0, 1.0}.validate()), ConfigError);
}

TEST_CASE("Schur approximations") {
    std::mt19937 rng(8);
    SUBCASE("B2 = 0 and Cz = I") {
        SaddleOperator op = test::random_saddle(rng, 6, 3);
        op.B2 = SparseMatrix::from_triplets(3, 6, {});
        op.Cz = SparseMatrix::identity(3);
        CHECK(max_abs(to_eigen(build_schur(op, AHatMode::plain_diag, 0.5, false).S_tilde) - MatrixXd::Identity(3, 3)) ==
              0.0);
    }
    SUBCASE("exact mode with diagonal K") {
        SaddleOperator op = test::random_saddle(rng, 6, 3);
        op.K = test::from_eigen(MatrixXd(VectorXd::LinSpaced(6, 1.0, 3.5).asDiagonal()));
        const Blocks b = blocks(op);
        const MatrixXd dense = b.Cz + b.B2 * b.K.inverse() * b.B1;
        CHECK(max_abs(to_eigen(build_schur(op, AHatMode::exact, 1.0, false).S_tilde) - dense) <= 1e-13);
        CHECK(max_abs(to_eigen(build_schur(op, AHatMode::plain_diag, 1.0, false).S_tilde) - dense) <= 1e-13);
        CHECK(max_abs(to_eigen(build_schur(op, AHatMode::exact, 0.3, true).S_tilde) - 0.3 * dense) <= 1e-13);
    }
    SUBCASE("abs_rowsum and plain diagonal differ by the off-diagonal sums") {
        const SaddleOperator op = test::random_saddle(rng, 8, 3);
        const MatrixXd k = to_eigen(op.K);
        const auto plain = build_schur(op, AHatMode::plain_diag, 1.0, false).a_hat_inv_diag;
        const auto rows = build_schur(op, AHatMode::abs_rowsum, 1.0, false).a_hat_inv_diag;
        for (index_t i = 0; i < 8; ++i) {
            const double off = k.row(i).cwiseAbs().sum() - std::abs(k(i, i));
            CHECK(1.0 / rows[i] - 1.0 / plain[i] == doctest::Approx(off).epsilon(1e-13));
        }
    }
}

TEST_CASE("block smoother sweeps equal the Richardson step of their splitting") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const index_t nu = 12 + trial, nl = 4 + trial % 3;
        const SaddleOperator op = test::random_saddle(rng, nu, nl);
        const MatrixXd a = test::merged_eigen(op);
        const VectorXd x0 = VectorXd::Random(nu + nl), b = VectorXd::Random(nu + nl);
        for (BlockKind kind : {BlockKind::uzawa, BlockKind::braess_sarazin, BlockKind::simple, BlockKind::simplec})
            for (AHatMode mode : {AHatMode::plain_diag, AHatMode::abs_rowsum}) {
                CAPTURE(to_string(kind));
                CAPTURE(to_string(mode));
                const double alpha = kind == BlockKind::braess_sarazin ? 1.3 : 0.8;
                const auto cfg = BlockSmootherConfig::exact(kind, alpha, mode);
                const AHatMode used = cfg.effective_a_hat_mode();
                const MatrixXd m = defining_m(op, kind, alpha, used);
                CHECK(max_abs(to_eigen(smoother_splitting(op, cfg)) - m) <= 1e-12 * max_abs(m));

                const BlockSmoother sm(shared(op), cfg);
                BlockVector x = split(x0, nu);
                sm.sweep(x, split(b, nu));
                const VectorXd expected = x0 + m.partialPivLu().solve(b - a * x0);
                CHECK((to_eigen(x.merged()) - expected).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + expected.norm()));
            }
    }
}

TEST_CASE("error matrices of one exact sweep") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        const index_t nu = 10 + 3 * trial, nl = 3 + trial;
        const SaddleOperator op = test::random_saddle(rng, nu, nl);
        const Blocks bl = blocks(op);
        const MatrixXd a = test::merged_eigen(op);
        const MatrixXd dinv = bl.K.diagonal().cwiseInverse().asDiagonal();
        const MatrixXd zuu = MatrixXd::Zero(nu, nu), zul = MatrixXd::Zero(nu, nl), zlu = MatrixXd::Zero(nl, nu),
                       zll = MatrixXd::Zero(nl, nl);

        auto from_sweep = [&](const BlockSmootherConfig& cfg) {
            return MatrixXd(a - sweep_inverse(BlockSmoother(shared(op), cfg)).inverse());
        };

        const auto uz = BlockSmootherConfig::exact(BlockKind::uzawa, 1.0, AHatMode::plain_diag);
        const MatrixXd e_uz = assemble(zuu, bl.B1, zlu, bl.B2 * dinv * bl.B1);
        CHECK(max_abs(from_sweep(uz) - e_uz) <= 1e-10);
        CHECK(max_abs(to_eigen(error_matrix(op, uz)) - e_uz) <= 1e-12);

        const double alpha = 1.7;
        const auto bs = BlockSmootherConfig::exact(BlockKind::braess_sarazin, alpha, AHatMode::plain_diag);
        const MatrixXd e_bs = assemble(bl.K - alpha * MatrixXd(bl.K.diagonal().asDiagonal()), zul, zlu, zll);
        CHECK(max_abs(from_sweep(bs) - e_bs) <= 1e-10);
        CHECK(max_abs(to_eigen(error_matrix(op, bs)) - e_bs) <= 1e-12);

        for (double al : {1.0, 0.6}) {
            const auto si = BlockSmootherConfig::exact(BlockKind::simple, al, AHatMode::plain_diag);
            const MatrixXd e_si = assemble(zuu, bl.B1 - bl.K * dinv * bl.B1, zlu, zll);
            CHECK(max_abs(from_sweep(si) - e_si) <= 1e-10);
            CHECK(max_abs(to_eigen(error_matrix(op, si)) - e_si) <= 1e-12);
        }

        // Exact splittings: Ahat = K for SIMPLE, diagonal K and alpha = 1 for Braess-Sarazin.
        CHECK(max_abs(to_eigen(error_matrix(op, BlockSmootherConfig::exact(BlockKind::simple, 0.7, AHatMode::exact)))) <=
              1e-11);
        SaddleOperator diag_op = op;
        diag_op.K = test::from_eigen(MatrixXd(bl.K.diagonal().asDiagonal()));
        CHECK(max_abs(to_eigen(error_matrix(
                  diag_op, BlockSmootherConfig::exact(BlockKind::braess_sarazin, 1.0, AHatMode::plain_diag)))) == 0.0);

        // Uzawa keeps B1 in the first block row and B2 Ahat^-1 B1 in the second, even with Ahat = K.
        const MatrixXd e_uz_exact =
            to_eigen(error_matrix(op, BlockSmootherConfig::exact(BlockKind::uzawa, 1.0, AHatMode::exact)));
        CHECK(max_abs(e_uz_exact - assemble(zuu, bl.B1, zlu, bl.B2 * bl.K.inverse() * bl.B1)) <= 1e-11);
    }
}

TEST_CASE("constraint rows after one sweep") {
    std::mt19937 rng(13);
    double uzawa_min = 1e300;
    for (int trial = 0; trial < 10; ++trial) {
        const SaddleOperator op = test::random_saddle(rng, 20, 6);
        const BlockVector b{test::random_vector(rng, 20), test::random_vector(rng, 6)};
        const BlockVector x0{test::random_vector(rng, 20), test::random_vector(rng, 6)};
        for (BlockKind kind : {BlockKind::braess_sarazin, BlockKind::simple, BlockKind::simplec}) {
            BlockVector x = x0;
            BlockSmoother(shared(op), BlockSmootherConfig::exact(kind, 0.9, AHatMode::plain_diag)).sweep(x, b);
            CHECK(max_abs(to_eigen(op.constraint_residual(x, b.lam))) <= 1e-10);
        }
        BlockVector x = x0;
        BlockSmoother(shared(op), BlockSmootherConfig::exact(BlockKind::uzawa, 0.9, AHatMode::plain_diag)).sweep(x, b);
        uzawa_min = std::min(uzawa_min, max_abs(to_eigen(op.constraint_residual(x, b.lam))));
    }
    CHECK(uzawa_min > 1e-6);
}

TEST_CASE("fixed point and presets") {
    std::mt19937 rng(14);
    const SaddleOperator op = test::random_saddle(rng, 15, 5);
    const BlockVector xs{test::random_vector(rng, 15), test::random_vector(rng, 5)};
    const BlockVector b = op.apply(xs);
    for (const auto& cfg : {BlockSmootherConfig::cheap_uzawa(), BlockSmootherConfig::cheap_braess_sarazin(),
                            BlockSmootherConfig::cheap_simple(), BlockSmootherConfig::cheap_simplec()}) {
        CAPTURE(describe(cfg));
        BlockVector x = xs;
        BlockSmoother(shared(op), cfg).smooth(x, b);
        CHECK(max_abs(to_eigen(x.merged()) - to_eigen(xs.merged())) <= 1e-12);
    }
    CHECK(BlockSmootherConfig::cheap_simplec().effective_a_hat_mode() == AHatMode::abs_rowsum);
    CHECK(BlockSmootherConfig::exact(BlockKind::braess_sarazin, 1.0, AHatMode::abs_rowsum).effective_a_hat_mode() ==
          AHatMode::plain_diag);
}

TEST_CASE("smoother config keys") {
    const auto cfg = KeyValueConfig::parse("s.kind = braess_sarazin\ns.alpha = 1.5\ns.corrector.kind = sgs\n");
    const auto c = block_smoother_from_config(cfg, "s.", BlockSmootherConfig::cheap_simplec());
    CHECK(c.kind == BlockKind::braess_sarazin);
    CHECK(c.alpha == 1.5);
    CHECK(c.corrector.kind == PointKind::sgs);
    CHECK(c.outer_sweeps == BlockSmootherConfig::cheap_braess_sarazin().outer_sweeps);
    CHECK(c.predictor.kind == BlockSmootherConfig::cheap_braess_sarazin().predictor.kind);
    CHECK_THROWS_AS(block_smoother_from_config(KeyValueConfig::parse("s.kind = vanka\n"), "s.", {}), ConfigError);
    CHECK_THROWS_AS(block_smoother_from_config(KeyValueConfig::parse("s.alpha = -1\n"), "s.", {}), ConfigError);
}
