#pragma once

// Exact linear algebra over a field K (Rational or Gaussian).
//
// Two layers: a small dense matrix for representation matrices, Gram forms
// and certificates, and a sparse incremental RREF for the graded solver
// systems, which routinely have tens of thousands of very sparse rows.
// RREF is unique per row space, so results are deterministic regardless of
// the order rows are fed in.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "liecov/errors.hpp"
#include "liecov/scalar.hpp"

namespace liecov {

template <class K>
class DenseMat {
  public:
    DenseMat() : rows_(0), cols_(0) {}
    DenseMat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, K(0)) {}

    static DenseMat identity(std::size_t n) {
        DenseMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = K(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    K& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const K& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    DenseMat transpose() const {
        DenseMat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    DenseMat operator*(const DenseMat& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("DenseMat product shape");
        DenseMat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const K& v = (*this)(i, k);
                if (is_zero(v)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    if (is_zero(o(k, j))) continue;
                    r(i, j) += v * o(k, j);
                }
            }
        return r;
    }

    DenseMat operator+(const DenseMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("DenseMat sum shape");
        DenseMat r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }

    DenseMat operator-(const DenseMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("DenseMat diff shape");
        DenseMat r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }

    friend bool operator==(const DenseMat& a, const DenseMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        if (v.size() != cols_) throw DimensionMismatch("DenseMat apply shape");
        std::vector<K> r(rows_, K(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                if (is_zero((*this)(i, j)) || is_zero(v[j])) continue;
                r[i] += (*this)(i, j) * v[j];
            }
        return r;
    }

    bool is_zero_matrix() const {
        for (const auto& v : a_)
            if (!is_zero(v)) return false;
        return true;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<K> a_;
};

template <class K>
DenseMat<K> scalar_times(const K& c, const DenseMat<K>& m) {
    DenseMat<K> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = c * m(i, j);
    return r;
}

// In-place reduced row echelon form; returns pivot columns in order.
template <class K>
std::vector<std::size_t> dense_rref(DenseMat<K>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && is_zero(m(sel, col))) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(sel, j));
        K inv = inverse(m(row, col));
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || is_zero(m(i, col))) continue;
            K f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class K>
std::size_t dense_rank(DenseMat<K> m) {
    return dense_rref(m).size();
}

// Kernel basis, one vector per free column, free variable set to 1.
template <class K>
std::vector<std::vector<K>> dense_kernel(DenseMat<K> m) {
    auto pivots = dense_rref(m);
    std::vector<std::size_t> pivot_of_col(m.cols(), SIZE_MAX);
    for (std::size_t r = 0; r < pivots.size(); ++r) pivot_of_col[pivots[r]] = r;
    std::vector<std::vector<K>> basis;
    for (std::size_t col = 0; col < m.cols(); ++col) {
        if (pivot_of_col[col] != SIZE_MAX) continue;
        std::vector<K> v(m.cols(), K(0));
        v[col] = K(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, col);
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class K>
std::optional<DenseMat<K>> dense_inverse(const DenseMat<K>& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix");
    std::size_t n = m.rows();
    DenseMat<K> aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = K(1);
    }
    auto pivots = dense_rref(aug);
    if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
    DenseMat<K> inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

// One solution of A x = b with free variables set to zero, or nullopt.
template <class K>
std::optional<std::vector<K>> dense_solve(const DenseMat<K>& A, const std::vector<K>& b) {
    if (b.size() != A.rows()) throw DimensionMismatch("dense_solve shape");
    DenseMat<K> aug(A.rows(), A.cols() + 1);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) aug(i, j) = A(i, j);
        aug(i, A.cols()) = b[i];
    }
    auto pivots = dense_rref(aug);
    if (!pivots.empty() && pivots.back() == A.cols()) return std::nullopt;
    std::vector<K> x(A.cols(), K(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, A.cols());
    return x;
}

// ---------------------------------------------------------------------------
// Sparse RREF

template <class K>
using SparseRow = std::vector<std::pair<std::int32_t, K>>;  // sorted by column

template <class K>
SparseRow<K> sparse_axpy(const SparseRow<K>& r, const K& f, const SparseRow<K>& p) {
    // r - f * p, merged
    SparseRow<K> out;
    out.reserve(r.size() + p.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < p.size()) {
        if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
            out.push_back(r[i++]);
        } else if (i == r.size() || p[j].first < r[i].first) {
            out.emplace_back(p[j].first, -(f * p[j].second));
            ++j;
        } else {
            K v = r[i].second - f * p[j].second;
            if (!is_zero(v)) out.emplace_back(r[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

// Incremental reduced row echelon form. Pivots are only created at columns
// < pivot_limit; columns beyond it act as an attached right-hand-side block,
// so batches of linear systems share one elimination.
template <class K>
class SparseRref {
  public:
    explicit SparseRref(std::int32_t ncols, std::int32_t pivot_limit = -1)
        : ncols_(ncols),
          limit_(pivot_limit < 0 ? ncols : pivot_limit),
          row_of_col_(static_cast<std::size_t>(limit_), -1) {}

    void add_row(SparseRow<K> r) {
        finalized_ = false;
        for (;;) {
            r = reduce_leading(std::move(r));
            if (r.empty()) return;
            std::int32_t lead = r.front().first;
            if (lead >= limit_) {
                residual_.push_back(std::move(r));
                return;
            }
            K inv = inverse(r.front().second);
            for (auto& [c, v] : r) v = v * inv;
            row_of_col_[lead] = static_cast<std::int32_t>(rows_.size());
            rows_.push_back(std::move(r));
            return;
        }
    }

    // Mutual back-reduction; the result is the canonical RREF of the row space.
    void finalize() {
        if (finalized_) return;
        std::vector<std::int32_t> order;
        for (std::int32_t c = limit_ - 1; c >= 0; --c)
            if (row_of_col_[c] >= 0) order.push_back(row_of_col_[c]);
        // order holds row indices by descending pivot column; reduce each row
        // against all pivots to its right.
        for (std::size_t k = 1; k < order.size(); ++k) {
            auto& row = rows_[order[k]];
            SparseRow<K> acc = std::move(row);
            for (std::size_t i = 1; i < acc.size();) {
                std::int32_t c = acc[i].first;
                std::int32_t pr = (c < limit_) ? row_of_col_[c] : -1;
                if (pr >= 0 && pr != order[k]) {
                    acc = sparse_axpy(acc, acc[i].second, rows_[pr]);
                } else {
                    ++i;
                }
            }
            row = std::move(acc);
        }
        finalized_ = true;
    }

    std::size_t rank() const { return rows_.size(); }

    std::vector<std::int32_t> pivot_cols() const {
        std::vector<std::int32_t> p;
        for (std::int32_t c = 0; c < limit_; ++c)
            if (row_of_col_[c] >= 0) p.push_back(c);
        return p;
    }

    bool is_pivot(std::int32_t col) const { return row_of_col_[col] >= 0; }

    // Kernel of the coefficient block, one sparse vector per free column.
    std::vector<SparseRow<K>> kernel() {
        finalize();
        std::vector<SparseRow<K>> basis;
        for (std::int32_t f = 0; f < limit_; ++f) {
            if (row_of_col_[f] >= 0) continue;
            SparseRow<K> v;
            for (std::int32_t c = 0; c < limit_; ++c) {
                if (c == f) {
                    v.emplace_back(f, K(1));
                    continue;
                }
                std::int32_t pr = row_of_col_[c];
                if (pr < 0) continue;
                const auto& row = rows_[pr];
                auto it = std::lower_bound(row.begin(), row.end(), f,
                                           [](const auto& e, std::int32_t col) { return e.first < col; });
                if (it != row.end() && it->first == f) v.emplace_back(c, -it->second);
            }
            std::sort(v.begin(), v.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Solution of the system whose RHS sits in column limit + rhs_index, with
    // all free variables set to zero. nullopt when inconsistent.
    std::optional<std::vector<K>> solution(std::int32_t rhs_index) {
        finalize();
        std::int32_t bc = limit_ + rhs_index;
        for (const auto& r : residual_) {
            auto it = std::lower_bound(r.begin(), r.end(), bc,
                                       [](const auto& e, std::int32_t col) { return e.first < col; });
            if (it != r.end() && it->first == bc && !is_zero(it->second)) return std::nullopt;
        }
        std::vector<K> x(static_cast<std::size_t>(limit_), K(0));
        for (std::int32_t c = 0; c < limit_; ++c) {
            std::int32_t pr = row_of_col_[c];
            if (pr < 0) continue;
            const auto& row = rows_[pr];
            auto it = std::lower_bound(row.begin(), row.end(), bc,
                                       [](const auto& e, std::int32_t col) { return e.first < col; });
            if (it != row.end() && it->first == bc) x[static_cast<std::size_t>(c)] = it->second;
        }
        return x;
    }

  private:
    SparseRow<K> reduce_leading(SparseRow<K> r) {
        while (!r.empty()) {
            std::int32_t lead = r.front().first;
            if (lead >= limit_) break;
            std::int32_t pr = row_of_col_[lead];
            if (pr < 0) break;
            r = sparse_axpy(r, r.front().second, rows_[pr]);
        }
        return r;
    }

    std::int32_t ncols_;
    std::int32_t limit_;
    std::vector<std::int32_t> row_of_col_;
    std::vector<SparseRow<K>> rows_;
    std::vector<SparseRow<K>> residual_;
    bool finalized_ = false;
};

}  // namespace liecov
