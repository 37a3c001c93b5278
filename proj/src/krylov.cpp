#include "camg/krylov.hpp"

#include <chrono>
#include <cmath>

#include "camg/vector.hpp"

namespace camg {

void GmresConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("gmres: rel_tol must lie in (0, 1)");
    if (restart < 1) throw ConfigError("gmres: restart must be at least 1");
    if (max_iters < 1) throw ConfigError("gmres: max_iters must be at least 1");
}

std::vector<double> gmres(const LinearOperator& apply_a, const LinearOperator& apply_minv, std::span<const double> b,
                          const GmresConfig& cfg, SolveReport& report) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto n = b.size();
    std::vector<double> x(n, 0.0), r(b.begin(), b.end()), w(n), z(n);
    const double setup_seconds = report.setup_seconds;
    report = SolveReport{};
    report.setup_seconds = setup_seconds;

    const double r0 = norm2(r);
    report.residual_history.push_back(1.0);
    if (r0 == 0.0) {
        report.converged = true;
        report.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return x;
    }
    auto precondition = [&](std::span<const double> v, std::span<double> out) {
        if (apply_minv)
            apply_minv(v, out);
        else
            std::copy(v.begin(), v.end(), out.begin());
    };
    auto true_residual = [&] {
        apply_a(x, w);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
        return norm2(r);
    };

    const auto m = static_cast<std::size_t>(cfg.restart);
    std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
    std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m), sn(m), g(m + 1);
    double beta = r0;

    while (report.iterations < cfg.max_iters) {
        for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        std::size_t k = 0;
        for (; k < m && report.iterations < cfg.max_iters; ++k) {
            precondition(v[k], z);
            apply_a(z, w);
            const double w_norm = norm2(w);
            for (std::size_t j = 0; j <= k; ++j) {
                h[j][k] = dot(w, v[j]);
                axpy(-h[j][k], v[j], w);
            }
            h[k + 1][k] = norm2(w);
            const bool breakdown = h[k + 1][k] <= 1e-14 * w_norm;
            if (!breakdown)
                for (std::size_t i = 0; i < n; ++i) v[k + 1][i] = w[i] / h[k + 1][k];
            for (std::size_t j = 0; j < k; ++j) {
                const double t = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
                h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
                h[j][k] = t;
            }
            const double denom = std::hypot(h[k][k], h[k + 1][k]);
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            ++report.iterations;
            report.residual_history.push_back(std::abs(g[k + 1]) / r0);
            if (std::abs(g[k + 1]) <= cfg.rel_tol * r0 || breakdown) {
                ++k;
                break;
            }
        }
        // Back substitution and x += M^-1 V y.
        std::vector<double> y(k);
        for (std::size_t i = k; i-- > 0;) {
            double s = g[i];
            for (std::size_t j = i + 1; j < k; ++j) s -= h[i][j] * y[j];
            y[i] = s / h[i][i];
        }
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t j = 0; j < k; ++j) axpy(y[j], v[j], w);
        precondition(w, z);
        axpy(1.0, z, x);

        beta = true_residual();
        report.final_true_residual = beta / r0;
        if (beta <= cfg.rel_tol * r0) {
            report.converged = true;
            break;
        }
    }
    report.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return x;
}

}  // namespace camg
