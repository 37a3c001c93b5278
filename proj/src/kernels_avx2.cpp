// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check.

#include "camg/kernels.hpp"

#include <immintrin.h>

namespace camg::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double sum_squares_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

void csr_spmv_avx2(std::size_t num_rows, const index_t* offsets, const index_t* cols,
                   const double* values, const double* x, double* y) {
    static_assert(sizeof(index_t) == sizeof(long long));
    for (std::size_t i = 0; i < num_rows; ++i) {
        index_t k = offsets[i];
        const index_t end = offsets[i + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(cols + k));
            const __m256d xv = _mm256_i64gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(values + k), xv, acc);
        }
        double s = hsum(acc);
        for (; k < end; ++k) s += values[k] * x[cols[k]];
        y[i] = s;
    }
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{dot_avx2, axpy_avx2, sum_squares_avx2, csr_spmv_avx2, "avx2"};
    return &table;
}

}  // namespace camg::kernels
