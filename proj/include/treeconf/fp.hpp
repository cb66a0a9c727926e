#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

namespace treeconf {

/// Default working prime. Large enough that random endomorphisms split
/// generically, small enough for 64-bit modular products.
inline constexpr std::uint32_t kDefaultPrime = 32003;

/// Dense matrix over the prime field F_p. Row-major, deterministic
/// pivoting (first nonzero entry in scan order) throughout.
class FpMat {
public:
    FpMat() = default;
    FpMat(std::size_t rows, std::size_t cols, std::uint32_t p)
        : r_(rows), c_(cols), p_(p), a_(rows * cols, 0) {}

    static FpMat identity(std::size_t n, std::uint32_t p) {
        FpMat m(n, n, p);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    std::uint32_t prime() const { return p_; }

    std::uint32_t& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    std::uint32_t operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    bool operator==(const FpMat& o) const {
        return r_ == o.r_ && c_ == o.c_ && p_ == o.p_ && a_ == o.a_;
    }

    std::uint32_t add(std::uint32_t x, std::uint32_t y) const {
        std::uint32_t s = x + y;
        return s >= p_ ? s - p_ : s;
    }
    std::uint32_t sub(std::uint32_t x, std::uint32_t y) const { return x >= y ? x - y : x + p_ - y; }
    std::uint32_t mul(std::uint32_t x, std::uint32_t y) const {
        return std::uint32_t((std::uint64_t)x * y % p_);
    }
    std::uint32_t neg(std::uint32_t x) const { return x == 0 ? 0 : p_ - x; }
    std::uint32_t inv(std::uint32_t x) const {
        // extended Euclid
        assert(x != 0);
        std::int64_t a = x, b = p_, u = 1, v = 0;
        while (b) {
            std::int64_t q = a / b;
            a -= q * b; std::swap(a, b);
            u -= q * v; std::swap(u, v);
        }
        assert(a == 1);
        std::int64_t m = u % (std::int64_t)p_;
        if (m < 0) m += p_;
        return (std::uint32_t)m;
    }

    FpMat operator*(const FpMat& o) const {
        assert(c_ == o.r_ && p_ == o.p_);
        FpMat out(r_, o.c_, p_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                std::uint64_t aik = (*this)(i, k);
                if (!aik) continue;
                for (std::size_t j = 0; j < o.c_; ++j) {
                    std::uint64_t v = out(i, j) + aik * o(k, j) % p_;
                    out(i, j) = (std::uint32_t)(v >= p_ ? v - p_ : v);
                }
            }
        return out;
    }

    FpMat operator+(const FpMat& o) const {
        assert(r_ == o.r_ && c_ == o.c_);
        FpMat out(r_, c_, p_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = add(a_[i], o.a_[i]);
        return out;
    }

    FpMat operator-(const FpMat& o) const {
        assert(r_ == o.r_ && c_ == o.c_);
        FpMat out(r_, c_, p_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = sub(a_[i], o.a_[i]);
        return out;
    }

    FpMat scaled(std::uint32_t s) const {
        FpMat out(r_, c_, p_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = mul(a_[i], s);
        return out;
    }

    bool is_zero() const {
        for (auto v : a_) if (v) return false;
        return true;
    }

    FpMat transposed() const {
        FpMat out(c_, r_, p_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    /// In-place reduced row echelon form; returns pivot column per pivot row.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < c_ && row < r_; ++col) {
            std::size_t sel = row;
            while (sel < r_ && (*this)(sel, col) == 0) ++sel;
            if (sel == r_) continue;
            if (sel != row)
                for (std::size_t j = 0; j < c_; ++j) std::swap((*this)(sel, j), (*this)(row, j));
            std::uint32_t piv_inv = inv((*this)(row, col));
            for (std::size_t j = col; j < c_; ++j) (*this)(row, j) = mul((*this)(row, j), piv_inv);
            for (std::size_t i = 0; i < r_; ++i) {
                if (i == row) continue;
                std::uint32_t f = (*this)(i, col);
                if (!f) continue;
                for (std::size_t j = col; j < c_; ++j)
                    (*this)(i, j) = sub((*this)(i, j), mul(f, (*this)(row, j)));
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    std::size_t rank() const {
        FpMat t = *this;
        return t.rref().size();
    }

    /// Basis of the right kernel, one column vector each; canonical form
    /// (free variable set to 1, pivot entries filled from rref).
    std::vector<std::vector<std::uint32_t>> kernel_basis() const {
        FpMat t = *this;
        auto pivots = t.rref();
        std::vector<bool> is_pivot(c_, false);
        for (auto pc : pivots) is_pivot[pc] = true;
        std::vector<std::vector<std::uint32_t>> basis;
        for (std::size_t free = 0; free < c_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<std::uint32_t> v(c_, 0);
            v[free] = 1;
            for (std::size_t pr = 0; pr < pivots.size(); ++pr)
                v[pivots[pr]] = t.neg(t(pr, free));
            basis.push_back(std::move(v));
        }
        return basis;
    }

    /// Solve A x = b; returns the canonical solution with free variables 0,
    /// or nullopt when inconsistent.
    std::optional<std::vector<std::uint32_t>> solve(const std::vector<std::uint32_t>& b) const {
        assert(b.size() == r_);
        FpMat aug(r_, c_ + 1, p_);
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, c_) = b[i];
        }
        auto pivots = aug.rref();
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            if (pivots[pr] == c_) return std::nullopt;
        std::vector<std::uint32_t> x(c_, 0);
        for (std::size_t pr = 0; pr < pivots.size(); ++pr) x[pivots[pr]] = aug(pr, c_);
        return x;
    }

    /// Solve A X = B column-wise; nullopt if any column inconsistent.
    std::optional<FpMat> solve_matrix(const FpMat& B) const {
        assert(B.rows() == r_);
        FpMat aug(r_, c_ + B.cols(), p_);
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < B.cols(); ++j) aug(i, c_ + j) = B(i, j);
        }
        auto pivots = aug.rref();
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            if (pivots[pr] >= c_) return std::nullopt;
        FpMat X(c_, B.cols(), p_);
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            for (std::size_t j = 0; j < B.cols(); ++j) X(pivots[pr], j) = aug(pr, c_ + j);
        return X;
    }

    std::optional<FpMat> inverse() const {
        if (r_ != c_) return std::nullopt;
        auto inv = solve_matrix(identity(r_, p_));
        if (!inv) return std::nullopt;
        if (rank() != r_) return std::nullopt;
        return inv;
    }

    bool is_invertible() const { return r_ == c_ && rank() == r_; }

    /// Column-space basis: the lexicographically least subset of columns
    /// spanning the image, returned as a matrix of those columns.
    FpMat column_space_basis() const {
        FpMat t = *this;
        auto pivots = t.rref();
        FpMat out(r_, pivots.size(), p_);
        for (std::size_t k = 0; k < pivots.size(); ++k)
            for (std::size_t i = 0; i < r_; ++i) out(i, k) = (*this)(i, pivots[k]);
        return out;
    }

    /// Matrix power by repeated squaring.
    FpMat pow(std::uint64_t e) const {
        assert(r_ == c_);
        FpMat base = *this, out = identity(r_, p_);
        while (e) {
            if (e & 1) out = out * base;
            base = base * base;
            e >>= 1;
        }
        return out;
    }

    /// Characteristic polynomial coefficients, low degree first, monic.
    /// Hessenberg reduction then the standard recurrence.
    std::vector<std::uint32_t> charpoly() const {
        assert(r_ == c_);
        std::size_t n = r_;
        FpMat H = *this;
        // reduce to upper Hessenberg by similarity transforms
        for (std::size_t k = 0; k + 2 < n + (n ? 0 : 0) && n >= 3 && k < n - 2; ++k) {
            std::size_t piv = k + 1;
            while (piv < n && H(piv, k) == 0) ++piv;
            if (piv == n) continue;
            if (piv != k + 1) {
                for (std::size_t j = 0; j < n; ++j) std::swap(H(piv, j), H(k + 1, j));
                for (std::size_t i = 0; i < n; ++i) std::swap(H(i, piv), H(i, k + 1));
            }
            std::uint32_t d = inv(H(k + 1, k));
            for (std::size_t i = k + 2; i < n; ++i) {
                std::uint32_t f = mul(H(i, k), d);
                if (!f) continue;
                for (std::size_t j = 0; j < n; ++j) H(i, j) = sub(H(i, j), mul(f, H(k + 1, j)));
                for (std::size_t j2 = 0; j2 < n; ++j2) H(j2, k + 1) = add(H(j2, k + 1), mul(f, H(j2, i)));
            }
        }
        // p_0 = 1; p_k = charpoly of leading k x k Hessenberg block
        std::vector<std::vector<std::uint32_t>> p(n + 1);
        p[0] = {1};
        for (std::size_t k = 1; k <= n; ++k) {
            // p_k(x) = (x - H[k-1][k-1]) p_{k-1}(x) - sum_{m} H[k-1-m ... ] products
            std::vector<std::uint32_t> pk(k + 1, 0);
            std::uint32_t hk = H(k - 1, k - 1);
            for (std::size_t i = 0; i < p[k - 1].size(); ++i) {
                pk[i + 1] = add(pk[i + 1], p[k - 1][i]);
                pk[i] = sub(pk[i], mul(hk, p[k - 1][i]));
            }
            std::uint32_t prod = 1;
            for (std::size_t m = 1; m < k; ++m) {
                prod = mul(prod, H(k - m, k - m - 1));
                if (!prod) break;
                std::uint32_t coeff = mul(prod, H(k - m - 1, k - 1));
                if (!coeff) continue;
                for (std::size_t i = 0; i < p[k - m - 1].size(); ++i)
                    pk[i] = sub(pk[i], mul(coeff, p[k - m - 1][i]));
            }
            p[k] = std::move(pk);
        }
        return p[n];
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::uint32_t p_ = kDefaultPrime;
    std::vector<std::uint32_t> a_;
};

/// Roots in F_p of a polynomial given low-first, by direct scan.
inline std::vector<std::uint32_t> poly_roots(const std::vector<std::uint32_t>& poly, std::uint32_t p) {
    std::vector<std::uint32_t> roots;
    for (std::uint32_t x = 0; x < p; ++x) {
        std::uint64_t acc = 0;
        for (std::size_t i = poly.size(); i-- > 0;) acc = (acc * x + poly[i]) % p;
        if (acc == 0) roots.push_back(x);
    }
    return roots;
}

} // namespace treeconf
