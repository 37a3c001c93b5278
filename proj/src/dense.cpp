#include "camg/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace camg {

DenseMatrix DenseMatrix::identity(index_t n) {
    DenseMatrix m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require_dims(a.num_cols == b.num_rows, "dense_matmul: inner dimensions differ");
    DenseMatrix c(a.num_rows, b.num_cols);
    for (index_t i = 0; i < a.num_rows; ++i)
        for (index_t k = 0; k < a.num_cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (index_t j = 0; j < b.num_cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

DenseMatrix dense_transpose(const DenseMatrix& a) {
    DenseMatrix t(a.num_cols, a.num_rows);
    for (index_t i = 0; i < a.num_rows; ++i)
        for (index_t j = 0; j < a.num_cols; ++j) t(j, i) = a(i, j);
    return t;
}

DenseMatrix dense_subtract(const DenseMatrix& a, const DenseMatrix& b) {
    require_dims(a.num_rows == b.num_rows && a.num_cols == b.num_cols, "dense_subtract: shape mismatch");
    DenseMatrix c = a;
    for (std::size_t k = 0; k < c.values.size(); ++k) c.values[k] -= b.values[k];
    return c;
}

std::vector<double> dense_matvec(const DenseMatrix& a, std::span<const double> x) {
    require_dims(static_cast<index_t>(x.size()) == a.num_cols, "dense_matvec: length mismatch");
    std::vector<double> y(a.num_rows, 0.0);
    for (index_t i = 0; i < a.num_rows; ++i) {
        double s = 0.0;
        for (index_t j = 0; j < a.num_cols; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double dense_max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double v : a.values) m = std::max(m, std::abs(v));
    return m;
}

DenseLu::DenseLu(DenseMatrix a) : lu_(std::move(a)) {
    require_dims(lu_.num_rows == lu_.num_cols, "DenseLu: matrix must be square");
    const index_t n = lu_.num_rows;
    pivots_.resize(n);
    for (index_t k = 0; k < n; ++k) {
        index_t p = k;
        double best = std::abs(lu_(k, k));
        for (index_t i = k + 1; i < n; ++i)
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                p = i;
            }
        if (best == 0.0) throw SingularMatrixError("DenseLu: zero pivot in column " + std::to_string(k));
        pivots_[k] = p;
        if (p != k)
            for (index_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        const double inv = 1.0 / lu_(k, k);
        for (index_t i = k + 1; i < n; ++i) {
            double& lik = lu_(i, k);
            if (lik == 0.0) continue;
            lik *= inv;
            const double* rk = lu_.values.data() + k * n;
            double* ri = lu_.values.data() + i * n;
            for (index_t j = k + 1; j < n; ++j) ri[j] -= lik * rk[j];
        }
    }
}

void DenseLu::solve_in_place(std::span<double> x) const {
    const index_t n = lu_.num_rows;
    require_dims(static_cast<index_t>(x.size()) == n, "DenseLu::solve: length mismatch");
    for (index_t k = 0; k < n; ++k)
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    for (index_t i = 1; i < n; ++i) {
        const double* ri = lu_.values.data() + i * n;
        double s = x[i];
        for (index_t j = 0; j < i; ++j) s -= ri[j] * x[j];
        x[i] = s;
    }
    for (index_t i = n - 1; i >= 0; --i) {
        const double* ri = lu_.values.data() + i * n;
        double s = x[i];
        for (index_t j = i + 1; j < n; ++j) s -= ri[j] * x[j];
        x[i] = s / ri[i];
    }
}

std::vector<double> DenseLu::solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    solve_in_place(x);
    return x;
}

std::vector<double> dense_lu_solve(const DenseMatrix& a, std::span<const double> b) {
    return DenseLu(a).solve(b);
}

DenseMatrix dense_inverse(const DenseMatrix& a) {
    DenseLu lu(a);
    const index_t n = a.num_rows;
    DenseMatrix inv(n, n);
    std::vector<double> col(n);
    for (index_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        lu.solve_in_place(col);
        for (index_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

}  // namespace camg
