#pragma once

#include <string>
#include <vector>

#include "ntlie/algebra.hpp"

namespace ntlie {

/// The ring R = R_n(K,J) = NT_n(K) + M_n(J): n x n matrices over K whose
/// entry at (i,j) lies in I_{i,j}, with I_{i,j} = J on and above the main
/// diagonal and I_{i,j} = K strictly below it.
///
/// The additive basis is fixed once and for all: positions scanned row-major
/// (1,1),(1,2),...,(n,n); within a position the echelon basis of I_{i,j}
/// (the standard basis of K below the diagonal). All coordinates, golden
/// files and endomorphism matrices use this ordering.
struct RRing {
    FpAlgebra K;
    IdealSubspace J;
    std::size_t n = 0;
    u32 p = 0;

    Subspace annK_J;         // Ann_K(J)
    Subspace centerK;        // C(K)
    Subspace J_cap_centerK;  // J ∩ C(K)
    bool commutativeK = false;

    struct Atom {
        std::size_t i, j;  // 0-based position
        std::size_t k;     // index within the position basis
        FpVec kvec;        // the basis element as a K-coordinate vector
    };
    std::vector<Atom> basis;
    std::size_t D = 0;
    std::vector<std::size_t> pos_off;  // n*n offsets into basis
    std::vector<std::size_t> pos_dim;

    // structure tables: coordinates of basis_a * basis_b and [basis_a, basis_b]
    std::vector<std::vector<FpVec>> prod_table;
    std::vector<std::vector<FpVec>> brk_table;

    bool j_position(std::size_t i, std::size_t j) const { return i <= j; }

    std::size_t pos_index(std::size_t i, std::size_t j) const { return i * n + j; }

    std::size_t offset(std::size_t i, std::size_t j) const { return pos_off[pos_index(i, j)]; }
    std::size_t local_dim(std::size_t i, std::size_t j) const { return pos_dim[pos_index(i, j)]; }

    /// K-vector of the k-th basis element of I_{i,j}.
    FpVec position_basis_vec(std::size_t i, std::size_t j, std::size_t k) const {
        return j_position(i, j) ? J.space.basis[k] : K.unit(k);
    }

    std::string atom_label(std::size_t a) const {
        const Atom& at = basis[a];
        std::string coeff = j_position(at.i, at.j) ? "j" + std::to_string(at.k)
                                                   : K.basis_labels[at.k];
        return coeff + "*e[" + std::to_string(at.i + 1) + "," + std::to_string(at.j + 1) + "]";
    }
};

/// Element of R_n(K,J); entries validated against the position lattice on
/// construction (membership violations are hard errors, not clamping).
struct RMatrix {
    const RRing* ring = nullptr;
    std::vector<FpVec> entries;  // n*n K-vectors, row-major

    const FpVec& at(std::size_t i, std::size_t j) const { return entries[i * ring->n + j]; }
    FpVec& at(std::size_t i, std::size_t j) { return entries[i * ring->n + j]; }
};

/// Expected additive dimension of R_n(K,J) without building the ring.
inline std::size_t ring_dimension(const FpAlgebra& k, const IdealSubspace& j, std::size_t n) {
    std::size_t below = n * (n - 1) / 2;
    return below * k.dim + (n * n - below) * j.dim();
}

namespace detail {

inline void check_entry_membership(const RRing& r, std::size_t i, std::size_t j,
                                   const FpVec& v) {
    if (v.size() != r.K.dim) fail(Errc::DimensionMismatch, "entry is not a K-vector");
    if (r.j_position(i, j) && !r.J.space.member(v))
        fail(Errc::Membership, "entry at (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ") is not in J");
}

} // namespace detail

inline RMatrix make_rmatrix(const RRing& r, std::vector<FpVec> entries) {
    if (entries.size() != r.n * r.n) fail(Errc::DimensionMismatch, "entry grid is not n*n");
    for (std::size_t i = 0; i < r.n; ++i)
        for (std::size_t j = 0; j < r.n; ++j)
            detail::check_entry_membership(r, i, j, entries[i * r.n + j]);
    return RMatrix{&r, std::move(entries)};
}

inline RMatrix zero_rmatrix(const RRing& r) {
    return RMatrix{&r, std::vector<FpVec>(r.n * r.n, r.K.zero())};
}

/// x * e_{i,j} for a K-vector x (1-based positions in the math sense are
/// passed 0-based here).
inline RMatrix unit_rmatrix(const RRing& r, std::size_t i, std::size_t j, const FpVec& x) {
    RMatrix m = zero_rmatrix(r);
    detail::check_entry_membership(r, i, j, x);
    m.at(i, j) = x;
    return m;
}

/// c * E with c required to lie in J ∩ C(K); the identity matrix itself
/// belongs to R only when J contains 1.
inline RMatrix scalar_identity(const RRing& r, const FpVec& c) {
    if (!r.J_cap_centerK.member(c))
        fail(Errc::Membership, "scalar is not in J ∩ C(K)");
    RMatrix m = zero_rmatrix(r);
    for (std::size_t i = 0; i < r.n; ++i) m.at(i, i) = c;
    return m;
}

inline FpVec rmatrix_coords(const RMatrix& m) {
    const RRing& r = *m.ring;
    FpVec out(r.D, 0);
    for (std::size_t i = 0; i < r.n; ++i)
        for (std::size_t j = 0; j < r.n; ++j) {
            const FpVec& v = m.at(i, j);
            if (vec_is_zero(v)) continue;
            std::size_t off = r.offset(i, j);
            if (r.j_position(i, j)) {
                auto c = r.J.space.coordinates(v);
                if (!c) fail(Errc::Membership, "entry left J");
                for (std::size_t k = 0; k < c->size(); ++k) out[off + k] = (*c)[k];
            } else {
                for (std::size_t k = 0; k < r.K.dim; ++k) out[off + k] = v[k];
            }
        }
    return out;
}

inline RMatrix rmatrix_from_coords(const RRing& r, const FpVec& coords) {
    if (coords.size() != r.D) fail(Errc::DimensionMismatch, "coordinate vector is not D long");
    RMatrix m = zero_rmatrix(r);
    for (std::size_t a = 0; a < r.D; ++a) {
        if (coords[a] == 0) continue;
        const RRing::Atom& at = r.basis[a];
        vec_axpy(m.at(at.i, at.j), coords[a], at.kvec, r.p);
    }
    return m;
}

inline RMatrix rmatrix_add(const RMatrix& a, const RMatrix& b) {
    RMatrix r = a;
    for (std::size_t k = 0; k < r.entries.size(); ++k)
        vec_add_inplace(r.entries[k], b.entries[k], a.ring->p);
    return r;
}

inline RMatrix rmatrix_sub(const RMatrix& a, const RMatrix& b) {
    RMatrix r = a;
    for (std::size_t k = 0; k < r.entries.size(); ++k)
        vec_sub_inplace(r.entries[k], b.entries[k], a.ring->p);
    return r;
}

inline bool rmatrix_is_zero(const RMatrix& a) {
    for (const FpVec& v : a.entries)
        if (!vec_is_zero(v)) return false;
    return true;
}

/// Ring product in R (entrywise products in K); R is closed under it.
inline RMatrix rmatrix_mul(const RMatrix& a, const RMatrix& b) {
    if (a.ring != b.ring) fail(Errc::RingMismatch, "operands from different rings");
    const RRing& r = *a.ring;
    RMatrix out = zero_rmatrix(r);
    for (std::size_t i = 0; i < r.n; ++i)
        for (std::size_t m = 0; m < r.n; ++m) {
            const FpVec& aim = a.at(i, m);
            if (vec_is_zero(aim)) continue;
            for (std::size_t j = 0; j < r.n; ++j) {
                const FpVec& bmj = b.at(m, j);
                if (vec_is_zero(bmj)) continue;
                FpVec prod = r.K.mul(aim, bmj);
                vec_add_inplace(out.at(i, j), prod, r.p);
            }
        }
    return out;
}

/// Lie bracket a*b - b*a.
inline RMatrix bracket(const RMatrix& a, const RMatrix& b) {
    if (a.ring != b.ring) fail(Errc::RingMismatch, "operands from different rings");
    return rmatrix_sub(rmatrix_mul(a, b), rmatrix_mul(b, a));
}

/// Construct R_n(K,J), enumerate its additive basis and precompute the
/// product and bracket structure tables.
inline RRing make_matrix_ring(const FpAlgebra& k, const IdealSubspace& j, std::size_t n) {
    if (n < 3) fail(Errc::SizeTooSmall, "matrix size must be at least 3");
    if (j.space.ambient != k.dim || j.space.p != k.p)
        fail(Errc::IdealMismatch, "ideal does not live in the given algebra");
    if (!is_ideal(k, j.space)) fail(Errc::IdealMismatch, "subspace is not an ideal of K");

    RRing r;
    r.K = k;
    r.J = j;
    r.n = n;
    r.p = k.p;
    r.annK_J = annihilator(k, j);
    r.centerK = center(k);
    r.J_cap_centerK = subspace_intersect(j.space, r.centerK);
    r.commutativeK = k.is_commutative();

    r.pos_off.assign(n * n, 0);
    r.pos_dim.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = 0; jj < n; ++jj) {
            std::size_t d = r.j_position(i, jj) ? j.dim() : k.dim;
            r.pos_off[i * n + jj] = r.basis.size();
            r.pos_dim[i * n + jj] = d;
            for (std::size_t kk = 0; kk < d; ++kk)
                r.basis.push_back(RRing::Atom{i, jj, kk, r.position_basis_vec(i, jj, kk)});
        }
    r.D = r.basis.size();

    r.prod_table.assign(r.D, std::vector<FpVec>(r.D));
    r.brk_table.assign(r.D, std::vector<FpVec>(r.D));
    for (std::size_t a = 0; a < r.D; ++a) {
        const RRing::Atom& A = r.basis[a];
        for (std::size_t b = 0; b < r.D; ++b) {
            const RRing::Atom& B = r.basis[b];
            RMatrix prod = zero_rmatrix(r);
            if (A.j == B.i) prod.at(A.i, B.j) = k.mul(A.kvec, B.kvec);
            r.prod_table[a][b] = rmatrix_coords(prod);
        }
    }
    for (std::size_t a = 0; a < r.D; ++a)
        for (std::size_t b = 0; b < r.D; ++b) {
            FpVec v = r.prod_table[a][b];
            vec_sub_inplace(v, r.prod_table[b][a], r.p);
            r.brk_table[a][b] = std::move(v);
        }
    return r;
}

/// Bracket of coordinate vectors through the precomputed table.
inline FpVec bracket_coords(const RRing& r, const FpVec& x, const FpVec& y) {
    FpVec out(r.D, 0);
    for (std::size_t a = 0; a < r.D; ++a) {
        if (x[a] == 0) continue;
        for (std::size_t b = 0; b < r.D; ++b) {
            if (y[b] == 0) continue;
            vec_axpy(out, fp_mul(x[a], y[b], r.p), r.brk_table[a][b], r.p);
        }
    }
    return out;
}

namespace detail {

/// Subspace spanned by Ann_K(J) * e_{n,1} (the paper's formula for Ann R).
inline Subspace ann_formula(const RRing& r) {
    std::vector<FpVec> gens;
    for (const FpVec& a : r.annK_J.basis)
        gens.push_back(rmatrix_coords(unit_rmatrix(r, r.n - 1, 0, a)));
    return Subspace::span(r.p, r.D, gens);
}

} // namespace detail

/// Annihilator of R, solved from a*x = x*a = 0 against the whole basis and
/// cross-checked against the closed formula Ann_K(J) e_{n,1}.
inline Subspace ann_R(const RRing& r) {
    RrefAccumulator rows(r.p, r.D);
    for (std::size_t b = 0; b < r.D; ++b) {
        // rows of the operators x -> basis_b * x and x -> x * basis_b
        for (std::size_t out = 0; out < r.D; ++out) {
            FpVec left(r.D), right(r.D);
            for (std::size_t x = 0; x < r.D; ++x) {
                left[x] = r.prod_table[b][x][out];
                right[x] = r.prod_table[x][b][out];
            }
            rows.add_row(std::move(left));
            rows.add_row(std::move(right));
        }
    }
    FpMatrix kmat = kernel(rows.to_matrix());
    std::vector<FpVec> basis;
    for (std::size_t i = 0; i < kmat.rows; ++i) basis.push_back(kmat.row_vec(i));
    Subspace solved = Subspace::span(r.p, r.D, basis);
    if (!subspace_equal(solved, detail::ann_formula(r)))
        fail(Errc::FormulaMismatch, "solved Ann R differs from Ann_K(J) e_{n,1}");
    return solved;
}

/// Center of R, solved from commutation and cross-checked against
/// AnnR + (J ∩ C(K)) E.
inline Subspace center_R(const RRing& r) {
    RrefAccumulator rows(r.p, r.D);
    for (std::size_t b = 0; b < r.D; ++b) {
        for (std::size_t out = 0; out < r.D; ++out) {
            FpVec row(r.D);
            for (std::size_t x = 0; x < r.D; ++x)
                row[x] = fp_sub(r.prod_table[b][x][out], r.prod_table[x][b][out], r.p);
            rows.add_row(std::move(row));
        }
    }
    FpMatrix kmat = kernel(rows.to_matrix());
    std::vector<FpVec> basis;
    for (std::size_t i = 0; i < kmat.rows; ++i) basis.push_back(kmat.row_vec(i));
    Subspace solved = Subspace::span(r.p, r.D, basis);

    std::vector<FpVec> gens;
    for (const FpVec& a : r.annK_J.basis)
        gens.push_back(rmatrix_coords(unit_rmatrix(r, r.n - 1, 0, a)));
    for (const FpVec& c : r.J_cap_centerK.basis)
        gens.push_back(rmatrix_coords(scalar_identity(r, c)));
    Subspace formula = Subspace::span(r.p, r.D, gens);
    if (!subspace_equal(solved, formula))
        fail(Errc::FormulaMismatch, "solved C(R) differs from AnnR + (J∩C(K))E");
    return solved;
}

} // namespace ntlie
