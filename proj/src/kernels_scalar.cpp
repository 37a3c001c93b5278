#include "camg/kernels.hpp"

namespace camg::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum_squares_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

void csr_spmv_scalar(std::size_t num_rows, const index_t* offsets, const index_t* cols,
                     const double* values, const double* x, double* y) {
    for (std::size_t i = 0; i < num_rows; ++i) {
        double s = 0.0;
        for (index_t k = offsets[i]; k < offsets[i + 1]; ++k) s += values[k] * x[cols[k]];
        y[i] = s;
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{dot_scalar, axpy_scalar, sum_squares_scalar, csr_spmv_scalar,
                                   "scalar"};
    return table;
}

}  // namespace camg::kernels
