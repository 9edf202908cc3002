#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ntlie/linalg.hpp"

namespace ntlie {

/// Finite unital associative algebra over F_p (p an odd prime), presented by
/// structure constants on an additive basis. Elements are coordinate vectors
/// in that basis; all arithmetic is exact mod p.
struct FpAlgebra {
    u32 p = 0;
    std::size_t dim = 0;
    std::vector<std::string> basis_labels;
    FpVec one;
    /// table[i][j] = coordinates of basis_i * basis_j
    std::vector<std::vector<FpVec>> table;

    FpVec zero() const { return FpVec(dim, 0); }

    FpVec unit(std::size_t i) const {
        FpVec v(dim, 0);
        v[i] = 1;
        return v;
    }

    FpVec mul(const FpVec& x, const FpVec& y) const {
        FpVec r(dim, 0);
        for (std::size_t i = 0; i < dim; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                if (y[j] == 0) continue;
                u32 c = fp_mul(x[i], y[j], p);
                vec_axpy(r, c, table[i][j], p);
            }
        }
        return r;
    }

    /// Matrix of x -> a*x in the additive basis.
    FpMatrix left_mul_matrix(const FpVec& a) const {
        FpMatrix m(p, dim, dim);
        for (std::size_t j = 0; j < dim; ++j) {
            FpVec col = mul(a, unit(j));
            for (std::size_t r = 0; r < dim; ++r) m.at(r, j) = col[r];
        }
        return m;
    }

    /// Matrix of x -> x*a.
    FpMatrix right_mul_matrix(const FpVec& a) const {
        FpMatrix m(p, dim, dim);
        for (std::size_t j = 0; j < dim; ++j) {
            FpVec col = mul(unit(j), a);
            for (std::size_t r = 0; r < dim; ++r) m.at(r, j) = col[r];
        }
        return m;
    }

    bool is_commutative() const {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j)
                if (mul(unit(i), unit(j)) != mul(unit(j), unit(i))) return false;
        return true;
    }
};

enum class AlgebraKind { PrimeField, DualNumbers, UpperTriangular2, Table };

inline const char* algebra_kind_name(AlgebraKind k) {
    switch (k) {
    case AlgebraKind::PrimeField: return "prime_field";
    case AlgebraKind::DualNumbers: return "dual_numbers";
    case AlgebraKind::UpperTriangular2: return "upper_triangular_2";
    case AlgebraKind::Table: return "table";
    }
    return "?";
}

/// Description consumed by make_algebra; the table fields matter only for
/// AlgebraKind::Table.
struct AlgebraSpec {
    AlgebraKind kind = AlgebraKind::PrimeField;
    u32 p = 3;
    std::size_t dim = 0;
    std::vector<std::string> labels;
    FpVec one;
    std::vector<std::vector<FpVec>> table;

    AlgebraSpec() = default;
    AlgebraSpec(AlgebraKind k, u32 modulus) : kind(k), p(modulus) {}
};

namespace detail {

inline void verify_algebra(const FpAlgebra& a) {
    for (std::size_t i = 0; i < a.dim; ++i) {
        if (a.mul(a.one, a.unit(i)) != a.unit(i) || a.mul(a.unit(i), a.one) != a.unit(i))
            fail(Errc::NoIdentity, "claimed identity fails on basis element " +
                                       a.basis_labels[i]);
    }
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j)
            for (std::size_t k = 0; k < a.dim; ++k) {
                FpVec lhs = a.mul(a.mul(a.unit(i), a.unit(j)), a.unit(k));
                FpVec rhs = a.mul(a.unit(i), a.mul(a.unit(j), a.unit(k)));
                if (lhs != rhs)
                    fail(Errc::NotAssociative,
                         "witness triple (" + a.basis_labels[i] + "," + a.basis_labels[j] +
                             "," + a.basis_labels[k] + ")");
            }
}

} // namespace detail

/// Build and validate one of the supported base algebras. Associativity and
/// the two-sided identity are checked exhaustively on basis triples; p must
/// be an odd prime (the 2-torsion-free hypothesis).
inline FpAlgebra make_algebra(const AlgebraSpec& spec) {
    if (spec.p == 2 || !is_prime(spec.p))
        fail(Errc::EvenCharacteristic,
             "modulus " + std::to_string(spec.p) + " is not an odd prime");
    FpAlgebra a;
    a.p = spec.p;
    switch (spec.kind) {
    case AlgebraKind::PrimeField:
        a.dim = 1;
        a.basis_labels = {"1"};
        a.one = {1};
        a.table = {{{1}}};
        break;
    case AlgebraKind::DualNumbers:
        a.dim = 2;
        a.basis_labels = {"1", "t"};
        a.one = {1, 0};
        a.table = {{{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}};
        break;
    case AlgebraKind::UpperTriangular2:
        // basis E11, E12, E22 of upper triangular 2x2 matrices
        a.dim = 3;
        a.basis_labels = {"E11", "E12", "E22"};
        a.one = {1, 0, 1};
        a.table = {
            {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}},
            {{0, 0, 0}, {0, 0, 0}, {0, 1, 0}},
            {{0, 0, 0}, {0, 0, 0}, {0, 0, 1}},
        };
        break;
    case AlgebraKind::Table:
        a.dim = spec.dim ? spec.dim : spec.one.size();
        a.basis_labels = spec.labels;
        if (a.basis_labels.size() != a.dim) {
            a.basis_labels.clear();
            for (std::size_t i = 0; i < a.dim; ++i) a.basis_labels.push_back("b" + std::to_string(i));
        }
        a.one = spec.one;
        a.table = spec.table;
        if (a.dim == 0 || a.one.size() != a.dim || a.table.size() != a.dim)
            fail(Errc::ConfigError, "table algebra: inconsistent dimensions");
        for (auto& row : a.table) {
            if (row.size() != a.dim) fail(Errc::ConfigError, "table algebra: ragged table");
            for (auto& cell : row) {
                if (cell.size() != a.dim) fail(Errc::ConfigError, "table algebra: ragged table");
                for (u32& v : cell) v %= a.p;
            }
        }
        for (u32& v : a.one) v %= a.p;
        break;
    }
    detail::verify_algebra(a);
    return a;
}

/// Two-sided ideal of an FpAlgebra, stored as a canonical subspace together
/// with its square J^2 (the span of pairwise products).
struct IdealSubspace {
    Subspace space;
    Subspace square;

    std::size_t dim() const { return space.dim(); }
};

/// Is S closed under left/right multiplication by every basis element?
inline bool is_ideal(const FpAlgebra& a, const Subspace& s) {
    for (const FpVec& v : s.basis)
        for (std::size_t i = 0; i < a.dim; ++i) {
            if (!s.member(a.mul(a.unit(i), v))) return false;
            if (!s.member(a.mul(v, a.unit(i)))) return false;
        }
    return true;
}

namespace detail {

inline Subspace product_span(const FpAlgebra& a, const Subspace& s) {
    std::vector<FpVec> prods;
    for (const FpVec& x : s.basis)
        for (const FpVec& y : s.basis) prods.push_back(a.mul(x, y));
    return Subspace::span(a.p, a.dim, prods);
}

} // namespace detail

/// Smallest two-sided ideal containing the generators. Terminates because
/// the dimension is bounded by dim(A).
inline IdealSubspace ideal_closure(const FpAlgebra& a, const std::vector<FpVec>& gens) {
    Subspace s = Subspace::span(a.p, a.dim, gens);
    for (;;) {
        std::vector<FpVec> next;
        for (const FpVec& v : s.basis)
            for (std::size_t i = 0; i < a.dim; ++i) {
                FpVec l = a.mul(a.unit(i), v);
                FpVec r = a.mul(v, a.unit(i));
                if (!s.member(l)) next.push_back(std::move(l));
                if (!s.member(r)) next.push_back(std::move(r));
            }
        if (next.empty()) break;
        std::vector<FpVec> all = s.basis;
        all.insert(all.end(), next.begin(), next.end());
        s = Subspace::span(a.p, a.dim, all);
    }
    return IdealSubspace{s, detail::product_span(a, s)};
}

/// Wrap an existing subspace as an ideal, verifying absorption.
inline IdealSubspace as_ideal(const FpAlgebra& a, const Subspace& s) {
    if (s.ambient != a.dim || s.p != a.p)
        fail(Errc::IdealMismatch, "subspace does not live in the algebra");
    if (!is_ideal(a, s)) fail(Errc::IdealMismatch, "subspace is not a two-sided ideal");
    return IdealSubspace{s, detail::product_span(a, s)};
}

/// Ann_K(J) = {a in K : aJ = Ja = 0}, solved exactly.
inline Subspace annihilator(const FpAlgebra& a, const IdealSubspace& j) {
    RrefAccumulator rows(a.p, a.dim);
    for (const FpVec& jv : j.space.basis) {
        FpMatrix r = a.right_mul_matrix(jv); // x -> x*j
        FpMatrix l = a.left_mul_matrix(jv);  // x -> j*x
        for (std::size_t k = 0; k < a.dim; ++k) {
            rows.add_row(r.row_vec(k));
            rows.add_row(l.row_vec(k));
        }
    }
    FpMatrix k = kernel(rows.to_matrix());
    std::vector<FpVec> basis;
    for (std::size_t r = 0; r < k.rows; ++r) basis.push_back(k.row_vec(r));
    return Subspace::span(a.p, a.dim, basis);
}

/// Center C(K), solved from commutation against every basis element.
inline Subspace center(const FpAlgebra& a) {
    RrefAccumulator rows(a.p, a.dim);
    for (std::size_t i = 0; i < a.dim; ++i) {
        FpMatrix l = a.left_mul_matrix(a.unit(i));
        FpMatrix r = a.right_mul_matrix(a.unit(i));
        l.sub_inplace(r);
        for (std::size_t k = 0; k < a.dim; ++k) rows.add_row(l.row_vec(k));
    }
    FpMatrix k = kernel(rows.to_matrix());
    std::vector<FpVec> basis;
    for (std::size_t r = 0; r < k.rows; ++r) basis.push_back(k.row_vec(r));
    return Subspace::span(a.p, a.dim, basis);
}

} // namespace ntlie
