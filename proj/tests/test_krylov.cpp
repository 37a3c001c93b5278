#include <doctest.h>

#include <random>

#include "camg/experiments.hpp"
#include "camg/krylov.hpp"
#include "test_support.hpp"

using namespace camg;
using camg::test::to_eigen;

namespace {

LinearOperator dense_op(const Eigen::MatrixXd& a) {
    return [a](std::span<const double> x, std::span<double> y) {
        Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())) =
            a * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    };
}

void check_monotone_within_cycles(const SolveReport& r, index_t restart) {
    for (std::size_t i = 1; i < r.residual_history.size(); ++i)
        if ((i - 1) % static_cast<std::size_t>(restart) != 0) CHECK(r.residual_history[i] <= r.residual_history[i - 1]);
}

}  // namespace

TEST_CASE("trivial systems") {
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(5, 5);
    const std::vector<double> b{1, 2, 3, 4, 5};
    SolveReport r;
    auto x = gmres(dense_op(eye), dense_op(eye), b, {}, r);
    CHECK(r.iterations == 1);
    CHECK(r.converged);
    CHECK(x == b);

    const Eigen::MatrixXd d = Eigen::Vector3d(1, 10, 100).asDiagonal();
    x = gmres(dense_op(d), dense_op(d.inverse()), std::vector<double>{1, 1, 1}, {}, r);
    CHECK(r.iterations == 1);
    CHECK(x[2] == doctest::Approx(0.01));

    x = gmres(dense_op(d), {}, std::vector<double>{0, 0, 0}, {}, r);
    CHECK(r.iterations == 0);
    CHECK(r.converged);
}

TEST_CASE("finite termination without preconditioning") {
    std::mt19937 rng(31);
    for (index_t n : {5, 17, 40}) {
        CAPTURE(n);
        const Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n) + 3.0 * Eigen::MatrixXd::Identity(n, n);
        const auto b = test::random_vector(rng, n);
        GmresConfig cfg;
        cfg.rel_tol = 1e-10;
        SolveReport r;
        const auto x = gmres(dense_op(a), {}, b, cfg, r);
        CHECK(r.converged);
        CHECK(r.iterations <= n);
        const Eigen::VectorXd oracle = a.partialPivLu().solve(to_eigen(b));
        CHECK((to_eigen(x) - oracle).norm() <= 1e-8 * oracle.norm());
        // The Givens estimate and the recomputed residual agree at convergence.
        CHECK(std::abs(r.residual_history.back() - r.final_true_residual) <= 1e-8);
        check_monotone_within_cycles(r, cfg.restart);
    }
}

TEST_CASE("restarts and iteration limits") {
    std::mt19937 rng(32);
    const index_t n = 60;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (index_t i = 0; i < n; ++i) {
        a(i, i) = 2.0 + 0.05 * i;
        if (i > 0) a(i, i - 1) = -1.0;
        if (i + 1 < n) a(i, i + 1) = -0.7;
    }
    const auto b = test::random_vector(rng, n);
    GmresConfig cfg;
    cfg.restart = 7;
    SolveReport r;
    const auto x = gmres(dense_op(a), {}, b, cfg, r);
    CHECK(r.converged);
    CHECK(r.iterations > cfg.restart);
    check_monotone_within_cycles(r, cfg.restart);
    CHECK((a * to_eigen(x) - to_eigen(b)).norm() <= 1e-8 * to_eigen(b).norm() * 1.0001);

    cfg.max_iters = 3;
    gmres(dense_op(a), {}, b, cfg, r);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
    CHECK(r.residual_history.size() == 4);

    CHECK_THROWS_AS((GmresConfig{0.0, 10, 5}.validate()), ConfigError);
    CHECK_THROWS_AS((GmresConfig{1e-8, 10, 0}.validate()), ConfigError);
}

TEST_CASE("AMG-preconditioned GMRES on a contact problem matches the direct solve") {
    ExperimentConfig cfg;
    cfg.mesh.slave_elems = cfg.mesh.master_elems = {8, 8};
    cfg.mesh.angle = 0.2;
    cfg.hierarchy.max_coarse_size = 60;
    const ContactModel m = build_contact_model(cfg.mesh);
    const SolveOutcome out = solve_contact(m, cfg);
    CHECK(out.report.converged);
    CHECK(out.levels >= 2);
    CHECK(out.report.final_true_residual <= cfg.gmres.rel_tol);
    const Eigen::VectorXd oracle =
        test::merged_eigen(m.system.op).partialPivLu().solve(to_eigen(m.system.rhs.merged()));
    CHECK((to_eigen(out.x.merged()) - oracle).norm() <= 1e-6 * oracle.norm());

    ExperimentConfig plain = cfg;
    plain.preconditioner = PreconditionerKind::none;
    const SolveOutcome un = solve_contact(m, plain);
    CHECK(out.report.iterations < un.report.iterations);
}
