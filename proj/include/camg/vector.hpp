#pragma once

#include <span>
#include <vector>

#include "camg/common.hpp"

namespace camg {

double dot(std::span<const double> x, std::span<const double> y);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);

/// Displacement / Lagrange-multiplier pair of a saddle-point vector.
struct BlockVector {
    std::vector<double> u;
    std::vector<double> lam;

    BlockVector() = default;
    BlockVector(index_t n_u, index_t n_lam) : u(n_u, 0.0), lam(n_lam, 0.0) {}
    BlockVector(std::vector<double> u_part, std::vector<double> lam_part)
        : u(std::move(u_part)), lam(std::move(lam_part)) {}

    index_t size() const { return static_cast<index_t>(u.size() + lam.size()); }

    std::vector<double> merged() const;
    static BlockVector split(std::span<const double> merged, index_t n_u);
};

}  // namespace camg
