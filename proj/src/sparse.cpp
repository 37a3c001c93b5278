#include "camg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "camg/kernels.hpp"

namespace camg {

namespace {

// Sparse products only discard exact underflow so patterns stay deterministic.
constexpr double kProductDrop = 1e-300;

}  // namespace

SparseMatrix::SparseMatrix(index_t num_rows, index_t num_cols, std::vector<index_t> row_offsets,
                           std::vector<index_t> col_indices, std::vector<double> values)
    : num_rows_(num_rows),
      num_cols_(num_cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
    if (num_rows_ < 0 || num_cols_ < 0) throw_dimension("SparseMatrix: negative dimension");
    if (static_cast<index_t>(row_offsets_.size()) != num_rows_ + 1 || row_offsets_.front() != 0)
        throw_dimension("SparseMatrix: row_offsets must have num_rows+1 entries starting at 0");
    if (row_offsets_.back() != static_cast<index_t>(values_.size()) || col_indices_.size() != values_.size())
        throw_dimension("SparseMatrix: row_offsets, col_indices and values disagree on nnz");
    for (index_t i = 0; i < num_rows_; ++i) {
        if (row_offsets_[i + 1] < row_offsets_[i]) throw_dimension("SparseMatrix: row_offsets decreasing");
        for (index_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            const index_t c = col_indices_[k];
            if (c < 0 || c >= num_cols_) throw_dimension("SparseMatrix: column index out of range in row " + std::to_string(i));
            if (k > row_offsets_[i] && col_indices_[k - 1] >= c)
                throw_dimension("SparseMatrix: columns not strictly increasing in row " + std::to_string(i));
        }
    }
}

SparseMatrix SparseMatrix::from_triplets(index_t num_rows, index_t num_cols, std::vector<Triplet> triplets,
                                         double drop_below) {
    for (const Triplet& t : triplets)
        if (t.row < 0 || t.row >= num_rows || t.col < 0 || t.col >= num_cols)
            throw_dimension("from_triplets: entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                            ") out of range");
    std::sort(triplets.begin(), triplets.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    std::vector<index_t> offsets(num_rows + 1, 0);
    std::vector<index_t> cols;
    std::vector<double> vals;
    cols.reserve(triplets.size());
    vals.reserve(triplets.size());
    std::size_t k = 0;
    while (k < triplets.size()) {
        const index_t r = triplets[k].row;
        const index_t c = triplets[k].col;
        double v = 0.0;
        while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) v += triplets[k++].value;
        if (std::abs(v) <= drop_below) continue;
        cols.push_back(c);
        vals.push_back(v);
        ++offsets[r + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    return SparseMatrix(num_rows, num_cols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(index_t n) {
    std::vector<index_t> offsets(n + 1), cols(n);
    std::iota(offsets.begin(), offsets.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::zero(index_t num_rows, index_t num_cols) {
    return SparseMatrix(num_rows, num_cols, std::vector<index_t>(num_rows + 1, 0), {}, {});
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
    const auto n = static_cast<index_t>(d.size());
    std::vector<index_t> offsets(n + 1), cols(n);
    std::iota(offsets.begin(), offsets.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(d.begin(), d.end()));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& a, double drop_below) {
    std::vector<index_t> offsets(a.num_rows + 1, 0);
    std::vector<index_t> cols;
    std::vector<double> vals;
    for (index_t i = 0; i < a.num_rows; ++i) {
        for (index_t j = 0; j < a.num_cols; ++j)
            if (std::abs(a(i, j)) > drop_below) {
                cols.push_back(j);
                vals.push_back(a(i, j));
            }
        offsets[i + 1] = static_cast<index_t>(cols.size());
    }
    return SparseMatrix(a.num_rows, a.num_cols, std::move(offsets), std::move(cols), std::move(vals));
}

double SparseMatrix::at(index_t i, index_t j) const {
    const auto cols = row_cols(i);
    const auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return 0.0;
    return values_[row_offsets_[i] + (it - cols.begin())];
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(num_rows_, num_cols_);
    for (index_t i = 0; i < num_rows_; ++i)
        for (index_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) d(i, col_indices_[k]) = values_[k];
    return d;
}

SparseMatrix SparseMatrix::scaled(double s) const {
    std::vector<double> v = values_;
    for (double& x : v) x *= s;
    return SparseMatrix(num_rows_, num_cols_, row_offsets_, col_indices_, std::move(v));
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    if (static_cast<index_t>(x.size()) != a.num_cols())
        throw_dimension("spmv: x has length " + std::to_string(x.size()) + ", expected " +
                        std::to_string(a.num_cols()));
    require_dims(static_cast<index_t>(y.size()) == a.num_rows(), "spmv: output length mismatch");
    kernels::active().csr_spmv(static_cast<std::size_t>(a.num_rows()), a.row_offsets().data(),
                               a.col_indices().data(), a.values().data(), x.data(), y.data());
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
    std::vector<double> y(a.num_rows());
    spmv(a, x, y);
    return y;
}

void spmv_add(const SparseMatrix& a, std::span<const double> x, std::span<double> y, double alpha) {
    require_dims(static_cast<index_t>(x.size()) == a.num_cols(), "spmv_add: x length mismatch");
    require_dims(static_cast<index_t>(y.size()) == a.num_rows(), "spmv_add: y length mismatch");
    for (index_t i = 0; i < a.num_rows(); ++i) {
        double s = 0.0;
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * x[cols[k]];
        y[i] += alpha * s;
    }
}

std::vector<double> residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
    require_dims(static_cast<index_t>(b.size()) == a.num_rows(), "residual: b length mismatch");
    std::vector<double> r = spmv(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return r;
}

SparseMatrix transpose(const SparseMatrix& a) {
    std::vector<index_t> offsets(a.num_cols() + 1, 0);
    for (index_t c : a.col_indices()) ++offsets[c + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<index_t> next(offsets.begin(), offsets.end() - 1);
    std::vector<index_t> cols(a.nnz());
    std::vector<double> vals(a.nnz());
    for (index_t i = 0; i < a.num_rows(); ++i) {
        const auto rc = a.row_cols(i);
        const auto rv = a.row_values(i);
        for (std::size_t k = 0; k < rc.size(); ++k) {
            const index_t dst = next[rc[k]]++;
            cols[dst] = i;
            vals[dst] = rv[k];
        }
    }
    return SparseMatrix(a.num_cols(), a.num_rows(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix matmul(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.num_cols() != b.num_rows())
        throw_dimension("matmul: " + std::to_string(a.num_rows()) + "x" + std::to_string(a.num_cols()) + " times " +
                        std::to_string(b.num_rows()) + "x" + std::to_string(b.num_cols()));
    // Gustavson's row-by-row product with a dense accumulator.
    const index_t n = b.num_cols();
    std::vector<double> acc(n, 0.0);
    std::vector<index_t> marker(n, -1);
    std::vector<index_t> pattern;
    std::vector<index_t> offsets(a.num_rows() + 1, 0);
    std::vector<index_t> cols;
    std::vector<double> vals;
    for (index_t i = 0; i < a.num_rows(); ++i) {
        pattern.clear();
        const auto ac = a.row_cols(i);
        const auto av = a.row_values(i);
        for (std::size_t ka = 0; ka < ac.size(); ++ka) {
            const index_t k = ac[ka];
            const double aik = av[ka];
            const auto bc = b.row_cols(k);
            const auto bv = b.row_values(k);
            for (std::size_t kb = 0; kb < bc.size(); ++kb) {
                const index_t j = bc[kb];
                if (marker[j] != i) {
                    marker[j] = i;
                    acc[j] = 0.0;
                    pattern.push_back(j);
                }
                acc[j] += aik * bv[kb];
            }
        }
        std::sort(pattern.begin(), pattern.end());
        for (index_t j : pattern)
            if (std::abs(acc[j]) >= kProductDrop) {
                cols.push_back(j);
                vals.push_back(acc[j]);
            }
        offsets[i + 1] = static_cast<index_t>(cols.size());
    }
    return SparseMatrix(a.num_rows(), n, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix galerkin_triple(const SparseMatrix& r, const SparseMatrix& a, const SparseMatrix& p) {
    require_dims(r.num_cols() == a.num_rows() && a.num_cols() == p.num_rows(), "galerkin_triple: dimension mismatch");
    return matmul(matmul(r, a), p);
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
    require_dims(a.num_rows() == b.num_rows() && a.num_cols() == b.num_cols(), "add: shape mismatch");
    std::vector<index_t> offsets(a.num_rows() + 1, 0);
    std::vector<index_t> cols;
    std::vector<double> vals;
    for (index_t i = 0; i < a.num_rows(); ++i) {
        const auto ac = a.row_cols(i);
        const auto av = a.row_values(i);
        const auto bc = b.row_cols(i);
        const auto bv = b.row_values(i);
        std::size_t ka = 0, kb = 0;
        while (ka < ac.size() || kb < bc.size()) {
            index_t c;
            double v;
            if (kb == bc.size() || (ka < ac.size() && ac[ka] < bc[kb])) {
                c = ac[ka];
                v = alpha * av[ka++];
            } else if (ka == ac.size() || bc[kb] < ac[ka]) {
                c = bc[kb];
                v = beta * bv[kb++];
            } else {
                c = ac[ka];
                v = alpha * av[ka++] + beta * bv[kb++];
            }
            cols.push_back(c);
            vals.push_back(v);
        }
        offsets[i + 1] = static_cast<index_t>(cols.size());
    }
    return SparseMatrix(a.num_rows(), a.num_cols(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix scale_rows(const SparseMatrix& a, std::span<const double> d) {
    require_dims(static_cast<index_t>(d.size()) == a.num_rows(), "scale_rows: length mismatch");
    std::vector<double> v(a.values().begin(), a.values().end());
    for (index_t i = 0; i < a.num_rows(); ++i)
        for (index_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) v[k] *= d[i];
    return SparseMatrix(a.num_rows(), a.num_cols(), {a.row_offsets().begin(), a.row_offsets().end()},
                        {a.col_indices().begin(), a.col_indices().end()}, std::move(v));
}

std::vector<double> extract_diagonal(const SparseMatrix& a, DiagonalMode mode) {
    require_dims(a.num_rows() == a.num_cols(), "extract_diagonal: matrix must be square");
    std::vector<double> d(a.num_rows(), 0.0);
    for (index_t i = 0; i < a.num_rows(); ++i) {
        if (mode == DiagonalMode::plain) {
            d[i] = a.at(i, i);
        } else {
            double s = 0.0;
            for (double v : a.row_values(i)) s += std::abs(v);
            if (s == 0.0) throw SingularMatrixError("extract_diagonal: row " + std::to_string(i) + " is all zero");
            d[i] = s;
        }
    }
    return d;
}

SparseMatrix merge_blocks(const SparseMatrix& a11, const SparseMatrix& a12, const SparseMatrix& a21,
                          const SparseMatrix& a22) {
    require_dims(a11.num_rows() == a12.num_rows() && a21.num_rows() == a22.num_rows() &&
                     a11.num_cols() == a21.num_cols() && a12.num_cols() == a22.num_cols(),
                 "merge_blocks: block shapes inconsistent");
    const index_t n1 = a11.num_rows(), n2 = a21.num_rows();
    const index_t m1 = a11.num_cols(), m2 = a12.num_cols();
    std::vector<index_t> offsets(n1 + n2 + 1, 0);
    std::vector<index_t> cols;
    std::vector<double> vals;
    cols.reserve(a11.nnz() + a12.nnz() + a21.nnz() + a22.nnz());
    vals.reserve(cols.capacity());
    auto append = [&](const SparseMatrix& left, const SparseMatrix& right, index_t i) {
        for (std::size_t k = 0; k < left.row_cols(i).size(); ++k) {
            cols.push_back(left.row_cols(i)[k]);
            vals.push_back(left.row_values(i)[k]);
        }
        for (std::size_t k = 0; k < right.row_cols(i).size(); ++k) {
            cols.push_back(m1 + right.row_cols(i)[k]);
            vals.push_back(right.row_values(i)[k]);
        }
    };
    for (index_t i = 0; i < n1; ++i) {
        append(a11, a12, i);
        offsets[i + 1] = static_cast<index_t>(cols.size());
    }
    for (index_t i = 0; i < n2; ++i) {
        append(a21, a22, i);
        offsets[n1 + i + 1] = static_cast<index_t>(cols.size());
    }
    return SparseMatrix(n1 + n2, m1 + m2, std::move(offsets), std::move(cols), std::move(vals));
}

double asymmetry(const SparseMatrix& a) {
    require_dims(a.num_rows() == a.num_cols(), "asymmetry: matrix must be square");
    double m = 0.0;
    for (index_t i = 0; i < a.num_rows(); ++i) {
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) m = std::max(m, std::abs(vals[k] - a.at(cols[k], i)));
    }
    return m;
}

}  // namespace camg
