#pragma once

#include <vector>

#include "ntlie/matrix_ring.hpp"

namespace ntlie {

/// Additive (= F_p-linear) endomorphism of R, stored as a D x D matrix in
/// the ring's additive basis: column c holds the coordinates of the image of
/// basis element c. The ring must outlive the endomorphism.
struct AdditiveEndo {
    const RRing* ring = nullptr;
    FpMatrix m;

    static AdditiveEndo zero(const RRing& r) {
        return AdditiveEndo{&r, FpMatrix(r.p, r.D, r.D)};
    }

    static AdditiveEndo identity(const RRing& r) {
        return AdditiveEndo{&r, FpMatrix::identity(r.p, r.D)};
    }

    FpVec apply(const FpVec& coords) const { return m.matvec(coords); }

    RMatrix apply(const RMatrix& x) const {
        return rmatrix_from_coords(*ring, m.matvec(rmatrix_coords(x)));
    }

    bool is_zero() const { return m.is_zero(); }

    void add_inplace(const AdditiveEndo& o) { m.add_inplace(o.m); }
    void sub_inplace(const AdditiveEndo& o) { m.sub_inplace(o.m); }
};

inline AdditiveEndo endo_from_flat(const RRing& r, const FpVec& flat) {
    if (flat.size() != r.D * r.D) fail(Errc::DimensionMismatch, "flat endo has wrong length");
    AdditiveEndo e = AdditiveEndo::zero(r);
    e.m.a = flat;
    return e;
}

inline FpVec endo_to_flat(const AdditiveEndo& e) { return e.m.a; }

/// Domain marker for component maps and family parameter maps.
enum class MapDomain { K, J };

/// Linear map into K whose domain is K or J (in J's echelon-basis
/// coordinates); values are K-coordinate vectors.
struct LinMap {
    MapDomain domain = MapDomain::K;
    FpMatrix mat;  // K.dim rows, (domain dim) cols

    FpVec apply(const FpVec& domain_coords) const { return mat.matvec(domain_coords); }

    std::size_t domain_dim() const { return mat.cols; }
};

inline LinMap zero_map(const RRing& r, MapDomain d) {
    std::size_t cols = d == MapDomain::K ? r.K.dim : r.J.dim();
    return LinMap{d, FpMatrix(r.p, r.K.dim, cols)};
}

/// The component map Delta^{i,j}_{s,t}: I_{i,j} -> K, read off an
/// endomorphism: apply to basis-scaled matrix units at (i,j) and take the
/// (s,t) entry of the image.
inline LinMap component_map(const AdditiveEndo& e, std::size_t i, std::size_t j,
                            std::size_t s, std::size_t t) {
    const RRing& r = *e.ring;
    MapDomain dom = r.j_position(i, j) ? MapDomain::J : MapDomain::K;
    LinMap out = zero_map(r, dom);
    std::size_t off = r.offset(i, j), d = r.local_dim(i, j);
    for (std::size_t k = 0; k < d; ++k) {
        RMatrix img = rmatrix_from_coords(r, e.m.col_vec(off + k));
        const FpVec& v = img.at(s, t);
        for (std::size_t row = 0; row < r.K.dim; ++row) out.mat.at(row, k) = v[row];
    }
    return out;
}

/// J-coordinates of a K-vector known to lie in J.
inline FpVec j_coords(const RRing& r, const FpVec& v) {
    auto c = r.J.space.coordinates(v);
    if (!c) fail(Errc::Membership, "vector is not in J");
    return *c;
}

} // namespace ntlie
