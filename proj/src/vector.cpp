#include "camg/vector.hpp"

#include <algorithm>
#include <cmath>

#include "camg/kernels.hpp"

namespace camg {

double dot(std::span<const double> x, std::span<const double> y) {
    require_dims(x.size() == y.size(), "dot: length mismatch");
    return kernels::active().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    require_dims(x.size() == y.size(), "axpy: length mismatch");
    kernels::active().axpy(a, x.data(), y.data(), x.size());
}

double norm2(std::span<const double> x) { return std::sqrt(kernels::active().sum_squares(x.data(), x.size())); }

double norm_inf(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> BlockVector::merged() const {
    std::vector<double> m;
    m.reserve(u.size() + lam.size());
    m.insert(m.end(), u.begin(), u.end());
    m.insert(m.end(), lam.begin(), lam.end());
    return m;
}

BlockVector BlockVector::split(std::span<const double> merged, index_t n_u) {
    require_dims(n_u >= 0 && n_u <= static_cast<index_t>(merged.size()), "BlockVector::split: bad split point");
    return BlockVector(std::vector<double>(merged.begin(), merged.begin() + n_u),
                       std::vector<double>(merged.begin() + n_u, merged.end()));
}

}  // namespace camg
