#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation; an AVX2/FMA variant is selected at runtime when the CPU
// supports it. Set CAMG_SIMD=scalar in the environment to force the
// reference path.

#include <cstddef>
#include <string_view>

#include "camg/common.hpp"

namespace camg::kernels {

struct KernelTable {
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    /// sum of squares
    double (*sum_squares)(const double* x, std::size_t n);
    /// y[i] = sum_k values[k] * x[cols[k]] for k in [offsets[i], offsets[i+1])
    void (*csr_spmv)(std::size_t num_rows, const index_t* offsets, const index_t* cols,
                     const double* values, const double* x, double* y);
    std::string_view name;
};

const KernelTable& scalar_table();

/// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table();

bool cpu_has_avx2();

/// The table in use for this process, chosen once on first call.
const KernelTable& active();

}  // namespace camg::kernels
