#pragma once

#include <functional>
#include <span>
#include <vector>

#include "camg/common.hpp"

namespace camg {

struct GmresConfig {
    double rel_tol = 1e-8;
    index_t max_iters = 1000;
    index_t restart = 100;

    void validate() const;
};

struct SolveReport {
    index_t iterations = 0;
    std::vector<double> residual_history;  // relative residual, entry 0 is 1
    bool converged = false;
    double final_true_residual = 0.0;  // relative, recomputed from b - A x
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// y = op(x); x and y have the same length.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Right-preconditioned restarted GMRES with modified Gram-Schmidt Arnoldi and
/// Givens rotations, started from x = 0. Pass an empty preconditioner for none.
std::vector<double> gmres(const LinearOperator& apply_a, const LinearOperator& apply_minv, std::span<const double> b,
                          const GmresConfig& cfg, SolveReport& report);

}  // namespace camg
