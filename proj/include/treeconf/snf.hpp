#pragma once

#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "treeconf/rational.hpp"

namespace treeconf {

/// Dense arbitrary-precision integer matrix.
class IntMat {
public:
    IntMat() = default;
    IntMat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, 0) {}

    static IntMat identity(std::size_t n) {
        IntMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    Integer& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    bool operator==(const IntMat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

    IntMat operator*(const IntMat& o) const {
        assert(c_ == o.r_);
        IntMat out(r_, o.c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                const Integer& aik = (*this)(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < o.c_; ++j) {
                    const Integer& b = o(k, j);
                    if (b != 0) out(i, j) += aik * b;
                }
            }
        return out;
    }

    bool is_zero() const {
        for (const auto& v : a_) if (v != 0) return false;
        return true;
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Integer> a_;
};

struct SnfResult {
    IntMat S;                      // the Smith form, U*M*V == S
    IntMat U, V;                   // unimodular transforms (built from elementary ops)
    std::vector<Integer> diagonal; // nonzero invariant factors d_1 | d_2 | ...
    std::size_t rank = 0;
};

namespace detail {

inline void swap_rows(IntMat& M, IntMat& U, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < M.cols(); ++k) std::swap(M(i, k), M(j, k));
    for (std::size_t k = 0; k < U.cols(); ++k) std::swap(U(i, k), U(j, k));
}

inline void swap_cols(IntMat& M, IntMat& V, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < M.rows(); ++k) std::swap(M(k, i), M(k, j));
    for (std::size_t k = 0; k < V.rows(); ++k) std::swap(V(k, i), V(k, j));
}

// row_i -= q * row_j
inline void add_row(IntMat& M, IntMat& U, std::size_t i, std::size_t j, const Integer& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < M.cols(); ++k)
        if (M(j, k) != 0) M(i, k) -= q * M(j, k);
    for (std::size_t k = 0; k < U.cols(); ++k)
        if (U(j, k) != 0) U(i, k) -= q * U(j, k);
}

// col_i -= q * col_j
inline void add_col(IntMat& M, IntMat& V, std::size_t i, std::size_t j, const Integer& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < M.rows(); ++k)
        if (M(k, j) != 0) M(k, i) -= q * M(k, j);
    for (std::size_t k = 0; k < V.rows(); ++k)
        if (V(k, j) != 0) V(k, i) -= q * V(k, j);
}

inline void negate_row(IntMat& M, IntMat& U, std::size_t i) {
    for (std::size_t k = 0; k < M.cols(); ++k) M(i, k) = -M(i, k);
    for (std::size_t k = 0; k < U.cols(); ++k) U(i, k) = -U(i, k);
}

} // namespace detail

/**
 * Smith normal form over Z with unimodular transforms: U*M*V = S where S is
 * diagonal with d_1 | d_2 | ... | d_r, d_i > 0. U and V are products of
 * elementary operations, hence det = +-1 by construction; the caller can
 * reverify with snf_verify. Pivot selection prefers +-1 entries, which keeps
 * entry growth negligible on incidence matrices.
 */
inline SnfResult smith_normal_form(const IntMat& input) {
    using namespace detail;
    IntMat M = input;
    IntMat U = IntMat::identity(M.rows());
    IntMat V = IntMat::identity(M.cols());
    const std::size_t n = std::min(M.rows(), M.cols());

    for (std::size_t t = 0; t < n; ++t) {
        // pick pivot: smallest |entry| among nonzeros of the trailing block,
        // unit entries first (scan order breaks ties deterministically)
        bool found = false;
        std::size_t pi = t, pj = t;
        Integer best;
        for (std::size_t i = t; i < M.rows(); ++i)
            for (std::size_t j = t; j < M.cols(); ++j) {
                if (M(i, j) == 0) continue;
                Integer v = abs(M(i, j));
                if (!found || v < best) {
                    found = true;
                    best = v;
                    pi = i;
                    pj = j;
                    if (best == 1) goto pivot_done;
                }
            }
    pivot_done:
        if (!found) break;
        swap_rows(M, U, t, pi);
        swap_cols(M, V, t, pj);

        // Euclidean elimination of row t and column t
        for (;;) {
            bool touched = false;
            for (std::size_t i = t + 1; i < M.rows(); ++i) {
                if (M(i, t) == 0) continue;
                Integer q = M(i, t) / M(t, t);
                add_row(M, U, i, t, q);
                if (M(i, t) != 0) { // remainder smaller than pivot: swap up
                    swap_rows(M, U, t, i);
                    touched = true;
                }
            }
            for (std::size_t j = t + 1; j < M.cols(); ++j) {
                if (M(t, j) == 0) continue;
                Integer q = M(t, j) / M(t, t);
                add_col(M, V, j, t, q);
                if (M(t, j) != 0) {
                    swap_cols(M, V, t, j);
                    touched = true;
                }
            }
            if (!touched) {
                bool clean = true;
                for (std::size_t i = t + 1; i < M.rows(); ++i)
                    if (M(i, t) != 0) { clean = false; break; }
                if (clean)
                    for (std::size_t j = t + 1; j < M.cols(); ++j)
                        if (M(t, j) != 0) { clean = false; break; }
                if (clean) break;
            }
        }

        // ensure pivot divides the whole trailing block
        for (;;) {
            bool fixed = true;
            for (std::size_t i = t + 1; i < M.rows() && fixed; ++i)
                for (std::size_t j = t + 1; j < M.cols() && fixed; ++j)
                    if (M(i, j) % M(t, t) != 0) {
                        add_row(M, U, t, i, Integer(-1)); // row t += row i
                        fixed = false;
                    }
            if (fixed) break;
            // re-eliminate row t
            for (;;) {
                bool touched = false;
                for (std::size_t j = t + 1; j < M.cols(); ++j) {
                    if (M(t, j) == 0) continue;
                    Integer q = M(t, j) / M(t, t);
                    add_col(M, V, j, t, q);
                    if (M(t, j) != 0) {
                        swap_cols(M, V, t, j);
                        touched = true;
                    }
                }
                for (std::size_t i = t + 1; i < M.rows(); ++i) {
                    if (M(i, t) == 0) continue;
                    Integer q = M(i, t) / M(t, t);
                    add_row(M, U, i, t, q);
                    if (M(i, t) != 0) {
                        swap_rows(M, U, t, i);
                        touched = true;
                    }
                }
                if (!touched) break;
            }
        }
        if (M(t, t) < 0) negate_row(M, U, t);
    }

    SnfResult res;
    res.S = std::move(M);
    res.U = std::move(U);
    res.V = std::move(V);
    for (std::size_t t = 0; t < n; ++t) {
        if (res.S(t, t) == 0) break;
        res.diagonal.push_back(res.S(t, t));
    }
    res.rank = res.diagonal.size();
    return res;
}

/// Reverify U*M*V == S, S diagonal with the divisibility chain.
inline bool snf_verify(const IntMat& M, const SnfResult& res) {
    IntMat prod = res.U * M * res.V;
    if (!(prod == res.S)) return false;
    for (std::size_t i = 0; i < res.S.rows(); ++i)
        for (std::size_t j = 0; j < res.S.cols(); ++j)
            if (i != j && res.S(i, j) != 0) return false;
    for (std::size_t i = 0; i + 1 < res.diagonal.size(); ++i) {
        if (res.diagonal[i] <= 0) return false;
        if (res.diagonal[i + 1] % res.diagonal[i] != 0) return false;
    }
    return true;
}

inline std::size_t int_rank(const IntMat& M) { return smith_normal_form(M).rank; }

} // namespace treeconf
