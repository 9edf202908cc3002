#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ntlie/fp.hpp"

namespace ntlie {

/// Dense matrix over F_p, row-major, entries reduced in [0, p).
struct FpMatrix {
    u32 p = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<u32> a;

    FpMatrix() = default;
    FpMatrix(u32 p_, std::size_t r, std::size_t c) : p(p_), rows(r), cols(c), a(r * c, 0) {}

    u32& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    u32 at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    u32* row(std::size_t r) { return a.data() + r * cols; }
    const u32* row(std::size_t r) const { return a.data() + r * cols; }

    FpVec row_vec(std::size_t r) const { return FpVec(row(r), row(r) + cols); }
    FpVec col_vec(std::size_t c) const {
        FpVec v(rows);
        for (std::size_t r = 0; r < rows; ++r) v[r] = at(r, c);
        return v;
    }

    static FpMatrix identity(u32 p, std::size_t n) {
        FpMatrix m(p, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static FpMatrix from_rows(u32 p, std::size_t cols, const std::vector<FpVec>& rows) {
        FpMatrix m(p, rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r)
            std::copy(rows[r].begin(), rows[r].end(), m.row(r));
        return m;
    }

    bool is_zero() const { return vec_is_zero(a); }

    bool operator==(const FpMatrix& o) const {
        return p == o.p && rows == o.rows && cols == o.cols && a == o.a;
    }

    FpVec matvec(const FpVec& x) const {
        FpVec y(rows, 0);
        for (std::size_t r = 0; r < rows; ++r) {
            u64 acc = 0;
            const u32* rw = row(r);
            for (std::size_t c = 0; c < cols; ++c) acc += u64(rw[c]) * x[c];
            y[r] = static_cast<u32>(acc % p);
        }
        return y;
    }

    FpMatrix mul(const FpMatrix& o) const {
        FpMatrix r(p, rows, o.cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = 0; k < cols; ++k) {
                u32 v = at(i, k);
                if (v == 0) continue;
                const u32* ok = o.row(k);
                u32* ri = r.row(i);
                for (std::size_t j = 0; j < o.cols; ++j)
                    ri[j] = static_cast<u32>((ri[j] + u64(v) * ok[j]) % p);
            }
        return r;
    }

    void add_inplace(const FpMatrix& o) { vec_add_inplace(a, o.a, p); }
    void sub_inplace(const FpMatrix& o) { vec_sub_inplace(a, o.a, p); }
};

struct RrefResult {
    FpMatrix reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form with deterministic pivoting: leftmost column,
/// topmost remaining row.
inline RrefResult rref_rank(FpMatrix m) {
    const u32 p = m.p;
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t sel = r;
        while (sel < m.rows && m.at(sel, c) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != r)
            for (std::size_t k = 0; k < m.cols; ++k) std::swap(m.at(sel, k), m.at(r, k));
        u32 inv = fp_inv(m.at(r, c), p);
        if (inv != 1)
            for (std::size_t k = c; k < m.cols; ++k) m.at(r, k) = fp_mul(m.at(r, k), inv, p);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            u32 f = m.at(i, c);
            if (f == 0) continue;
            u32* ri = m.row(i);
            const u32* rr = m.row(r);
            for (std::size_t k = c; k < m.cols; ++k)
                ri[k] = static_cast<u32>((ri[k] + u64(p - f) * rr[k]) % p);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), pivots.size(), std::move(pivots)};
}

/// Echelonized basis of the right kernel {x : Mx = 0}, one row per basis
/// vector; rows.size() == cols - rank.
inline FpMatrix kernel(const FpMatrix& m) {
    RrefResult rr = rref_rank(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (std::size_t c : rr.pivots) is_pivot[c] = true;
    std::vector<FpVec> basis;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        FpVec v(m.cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < rr.rank; ++i)
            v[rr.pivots[i]] = fp_neg(rr.reduced.at(i, f), m.p);
        basis.push_back(std::move(v));
    }
    // canonicalize so equal kernels compare row-for-row
    return rref_rank(FpMatrix::from_rows(m.p, m.cols, basis)).reduced;
}

/// Some x with Mx = b, free variables set to 0; absent when inconsistent.
inline std::optional<FpVec> solve(const FpMatrix& m, const FpVec& b) {
    if (b.size() != m.rows) fail(Errc::DimensionMismatch, "solve: rhs length != rows");
    FpMatrix aug(m.p, m.rows, m.cols + 1);
    for (std::size_t r = 0; r < m.rows; ++r) {
        std::copy(m.row(r), m.row(r) + m.cols, aug.row(r));
        aug.at(r, m.cols) = b[r];
    }
    RrefResult rr = rref_rank(std::move(aug));
    if (!rr.pivots.empty() && rr.pivots.back() == m.cols) return std::nullopt;
    FpVec x(m.cols, 0);
    for (std::size_t i = 0; i < rr.rank; ++i) x[rr.pivots[i]] = rr.reduced.at(i, m.cols);
    return x;
}

/// Incremental RREF accumulator. Rows are kept mutually reduced and sorted
/// by pivot column at all times, so the final matrix is the canonical RREF
/// of everything fed in, independent of feeding order or blocking.
class RrefAccumulator {
public:
    RrefAccumulator(u32 p, std::size_t cols) : p_(p), cols_(cols) {}

    bool add_row(FpVec row) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            u32 f = row[pivots_[i]];
            if (f != 0) vec_axpy(row, p_ - f, rows_[i], p_);
        }
        std::size_t piv = 0;
        while (piv < cols_ && row[piv] == 0) ++piv;
        if (piv == cols_) return false;
        u32 inv = fp_inv(row[piv], p_);
        if (inv != 1)
            for (std::size_t k = piv; k < cols_; ++k) row[k] = fp_mul(row[k], inv, p_);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            u32 f = rows_[i][piv];
            if (f != 0) vec_axpy(rows_[i], p_ - f, row, p_);
        }
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
        std::size_t idx = static_cast<std::size_t>(it - pivots_.begin());
        pivots_.insert(it, piv);
        rows_.insert(rows_.begin() + idx, std::move(row));
        return true;
    }

    void add_rows(const FpMatrix& m) {
        for (std::size_t r = 0; r < m.rows; ++r) add_row(m.row_vec(r));
    }

    std::size_t rank() const { return rows_.size(); }
    const std::vector<FpVec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    FpMatrix to_matrix() const { return FpMatrix::from_rows(p_, cols_, rows_); }

private:
    u32 p_;
    std::size_t cols_;
    std::vector<FpVec> rows_;
    std::vector<std::size_t> pivots_;
};

/// Subspace of F_p^ambient in canonical form: basis rows are the RREF of any
/// spanning set, so equality is plain row comparison.
struct Subspace {
    u32 p = 0;
    std::size_t ambient = 0;
    std::vector<FpVec> basis;
    std::vector<std::size_t> pivots;

    static Subspace zero(u32 p, std::size_t ambient) { return Subspace{p, ambient, {}, {}}; }

    static Subspace span(u32 p, std::size_t ambient, const std::vector<FpVec>& gens) {
        RrefAccumulator acc(p, ambient);
        for (const FpVec& g : gens) acc.add_row(g);
        return Subspace{p, ambient, acc.rows(), acc.pivots()};
    }

    std::size_t dim() const { return basis.size(); }

    /// Remainder of v after reduction against the basis; zero iff v is a member.
    FpVec reduce(FpVec v) const {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            u32 f = v[pivots[i]];
            if (f != 0) vec_axpy(v, p - f, basis[i], p);
        }
        return v;
    }

    bool member(const FpVec& v) const { return vec_is_zero(reduce(v)); }

    /// Coordinates along the basis rows, when v is a member.
    std::optional<FpVec> coordinates(const FpVec& v) const {
        FpVec c(basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i) c[i] = v[pivots[i]];
        if (!member(v)) return std::nullopt;
        return c;
    }

    /// Matrix of v -> v - (projection onto the subspace); kernel is the space.
    FpMatrix residual_map() const {
        FpMatrix m = FpMatrix::identity(p, ambient);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            std::size_t pc = pivots[i];
            for (std::size_t c = 0; c < ambient; ++c)
                m.at(c, pc) = fp_sub(m.at(c, pc), basis[i][c], p);
        }
        // column pc of m picks up -basis_i; rows index output coordinates
        return m;
    }

    bool operator==(const Subspace& o) const {
        return p == o.p && ambient == o.ambient && basis == o.basis;
    }
};

inline bool subspace_equal(const Subspace& s1, const Subspace& s2) {
    if (s1.p != s2.p || s1.ambient != s2.ambient)
        fail(Errc::DimensionMismatch, "subspace_equal: ambient spaces differ");
    return s1.basis == s2.basis;
}

inline Subspace subspace_sum(const Subspace& s1, const Subspace& s2) {
    if (s1.p != s2.p || s1.ambient != s2.ambient)
        fail(Errc::DimensionMismatch, "subspace_sum: ambient spaces differ");
    RrefAccumulator acc(s1.p, s1.ambient);
    for (const FpVec& v : s1.basis) acc.add_row(v);
    for (const FpVec& v : s2.basis) acc.add_row(v);
    return Subspace{s1.p, s1.ambient, acc.rows(), acc.pivots()};
}

inline Subspace subspace_intersect(const Subspace& s1, const Subspace& s2) {
    if (s1.p != s2.p || s1.ambient != s2.ambient)
        fail(Errc::DimensionMismatch, "subspace_intersect: ambient spaces differ");
    FpMatrix r1 = s1.residual_map(), r2 = s2.residual_map();
    FpMatrix stacked(s1.p, 2 * s1.ambient, s1.ambient);
    std::copy(r1.a.begin(), r1.a.end(), stacked.a.begin());
    std::copy(r2.a.begin(), r2.a.end(), stacked.a.begin() + r1.a.size());
    FpMatrix k = kernel(stacked);
    std::vector<FpVec> rows;
    for (std::size_t r = 0; r < k.rows; ++r) rows.push_back(k.row_vec(r));
    return Subspace::span(s1.p, s1.ambient, rows);
}

} // namespace ntlie
