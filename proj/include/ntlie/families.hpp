#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ntlie/endo.hpp"

namespace ntlie {

enum class FamilyKind {
    Inner,
    Diagonal,
    Ring,
    AlmostAnnihilator,
    CentralLie,
    SpecialI,
    SpecialII,
    SpecialIII,
};

inline constexpr FamilyKind kAllFamilyKinds[] = {
    FamilyKind::Inner,          FamilyKind::Diagonal, FamilyKind::Ring,
    FamilyKind::AlmostAnnihilator, FamilyKind::CentralLie, FamilyKind::SpecialI,
    FamilyKind::SpecialII,      FamilyKind::SpecialIII,
};

inline const char* family_name(FamilyKind k) {
    switch (k) {
    case FamilyKind::Inner: return "inner";
    case FamilyKind::Diagonal: return "diagonal";
    case FamilyKind::Ring: return "ring";
    case FamilyKind::AlmostAnnihilator: return "almost_annihilator";
    case FamilyKind::CentralLie: return "central_lie";
    case FamilyKind::SpecialI: return "special_i";
    case FamilyKind::SpecialII: return "special_ii";
    case FamilyKind::SpecialIII: return "special_iii";
    }
    return "?";
}

/// Is the family defined at this matrix size? Type III lives on n = 3 only,
/// type II needs n >= 4 so its four source positions are distinct.
inline bool family_admissible(FamilyKind k, std::size_t n) {
    if (k == FamilyKind::SpecialIII) return n == 3;
    if (k == FamilyKind::SpecialII) return n >= 4;
    return true;
}

/// Parameters of one derivation family.
///
/// Inner carries a raw n*n grid of K-vectors (validated for membership in
/// R); Diagonal carries n arbitrary K-vectors. Every other family is a list
/// of parameter maps in a fixed role order:
///   ring                [theta: K]
///   almost_annihilator  [alpha: J, beta: J]
///   central_lie         [s_1..s_{n-1}: K, s_n: J, a_1..a_{n-1}: K, a_n: J, u: J, v: J]
///                       (s_* feed the (n,1) corner, a_* feed the identity
///                       component, u feeds the corner from the diagonal and
///                       v feeds the identity component from the diagonal)
///   special_i           [gamma: K, theta: K]
///   special_ii          [alpha: J, beta: J, gamma: J]
///   special_iii         [alpha: J, gamma: J]
struct FamilyParams {
    FamilyKind kind = FamilyKind::Inner;
    std::vector<FpVec> inner_entries;
    std::vector<FpVec> diagonal;
    std::vector<LinMap> maps;
};

struct MapRole {
    std::string name;
    MapDomain domain;
};

inline std::vector<MapRole> family_map_roles(FamilyKind k, std::size_t n) {
    std::vector<MapRole> roles;
    switch (k) {
    case FamilyKind::Inner:
    case FamilyKind::Diagonal:
        break;
    case FamilyKind::Ring:
        roles.push_back({"theta", MapDomain::K});
        break;
    case FamilyKind::AlmostAnnihilator:
        roles.push_back({"alpha", MapDomain::J});
        roles.push_back({"beta", MapDomain::J});
        break;
    case FamilyKind::CentralLie:
        for (std::size_t i = 1; i < n; ++i)
            roles.push_back({"s" + std::to_string(i), MapDomain::K});
        roles.push_back({"s" + std::to_string(n), MapDomain::J});
        for (std::size_t i = 1; i < n; ++i)
            roles.push_back({"a" + std::to_string(i), MapDomain::K});
        roles.push_back({"a" + std::to_string(n), MapDomain::J});
        roles.push_back({"u", MapDomain::J});
        roles.push_back({"v", MapDomain::J});
        break;
    case FamilyKind::SpecialI:
        roles.push_back({"gamma", MapDomain::K});
        roles.push_back({"theta", MapDomain::K});
        break;
    case FamilyKind::SpecialII:
        roles.push_back({"alpha", MapDomain::J});
        roles.push_back({"beta", MapDomain::J});
        roles.push_back({"gamma", MapDomain::J});
        break;
    case FamilyKind::SpecialIII:
        roles.push_back({"alpha", MapDomain::J});
        roles.push_back({"gamma", MapDomain::J});
        break;
    }
    return roles;
}

struct Violation {
    std::string condition;
    std::string witness;
};

namespace detail {

/// One bilinear or membership condition, flattened to rows over the packed
/// parameter vector. Rows belonging to the same witness are grouped so a
/// violation can name the offending basis pair.
struct ParamEquation {
    std::string condition;
    std::string witness;
    std::vector<FpVec> rows;
};

/// Linear system over the entries of a family's parameter maps. Packing is
/// column-major per map, maps in role order.
class ParamSystem {
public:
    ParamSystem(const RRing& r, FamilyKind kind)
        : r_(r), roles_(family_map_roles(kind, r.n)) {
        offsets_.reserve(roles_.size());
        std::size_t off = 0;
        for (const MapRole& role : roles_) {
            offsets_.push_back(off);
            off += r_.K.dim * domain_dim(role.domain);
        }
        total_ = off;
    }

    std::size_t total() const { return total_; }
    const std::vector<MapRole>& roles() const { return roles_; }

    std::size_t domain_dim(MapDomain d) const {
        return d == MapDomain::K ? r_.K.dim : r_.J.dim();
    }

    FpVec pack(const std::vector<LinMap>& maps) const {
        FpVec out(total_, 0);
        for (std::size_t m = 0; m < maps.size(); ++m) {
            const FpMatrix& mat = maps[m].mat;
            for (std::size_t c = 0; c < mat.cols; ++c)
                for (std::size_t row = 0; row < mat.rows; ++row)
                    out[offsets_[m] + c * r_.K.dim + row] = mat.at(row, c);
        }
        return out;
    }

    std::vector<LinMap> unpack(const FpVec& flat) const {
        std::vector<LinMap> maps;
        for (std::size_t m = 0; m < roles_.size(); ++m) {
            LinMap lm{roles_[m].domain,
                      FpMatrix(r_.p, r_.K.dim, domain_dim(roles_[m].domain))};
            for (std::size_t c = 0; c < lm.mat.cols; ++c)
                for (std::size_t row = 0; row < r_.K.dim; ++row)
                    lm.mat.at(row, c) = flat[offsets_[m] + c * r_.K.dim + row];
            maps.push_back(std::move(lm));
        }
        return maps;
    }

    /// A term op * map_m(d): contribution to the equation's output rows.
    struct Term {
        std::size_t map_index;
        FpVec domain_vec;
        const FpMatrix* op;  // nullptr = identity on K
        bool negate = false;
    };

    void equation(const std::string& cond, const std::string& witness,
                  const std::vector<Term>& terms) {
        std::size_t t = r_.K.dim;
        std::vector<FpVec> rows(t, FpVec(total_, 0));
        for (const Term& term : terms) {
            for (std::size_t o = 0; o < t; ++o) {
                FpVec& row = rows[o];
                for (std::size_t rp = 0; rp < t; ++rp) {
                    u32 coef = term.op ? term.op->at(o, rp) : (o == rp ? 1 : 0);
                    if (coef == 0) continue;
                    if (term.negate) coef = fp_neg(coef, r_.p);
                    for (std::size_t c = 0; c < term.domain_vec.size(); ++c) {
                        u32 d = term.domain_vec[c];
                        if (d == 0) continue;
                        std::size_t idx = offsets_[term.map_index] + c * t + rp;
                        row[idx] = fp_add(row[idx], fp_mul(coef, d, r_.p), r_.p);
                    }
                }
            }
        }
        equations_.push_back(ParamEquation{cond, witness, std::move(rows)});
    }

    const std::vector<ParamEquation>& equations() const { return equations_; }

private:
    const RRing& r_;
    std::vector<MapRole> roles_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
    std::vector<ParamEquation> equations_;
};

/// Build every side-condition of the family as linear equations over the
/// parameter entries. Bilinear conditions are checked on basis pairs, which
/// is exhaustive because all of them are biadditive.
inline ParamSystem family_conditions(const RRing& r, FamilyKind kind) {
    ParamSystem sys(r, kind);
    const FpAlgebra& K = r.K;
    std::size_t n = r.n;
    std::size_t tj = r.J.dim();

    auto klabel = [&](std::size_t i) { return K.basis_labels[i]; };
    auto jlabel = [&](std::size_t i) { return "j" + std::to_string(i); };
    auto junit = [&](std::size_t k) {
        FpVec v(tj, 0);
        v[k] = 1;
        return v;
    };
    auto jvec_in_K = [&](std::size_t k) { return r.J.space.basis[k]; };

    // cached operator matrices
    std::vector<FpMatrix> lmul, rmul;
    for (std::size_t i = 0; i < K.dim; ++i) {
        lmul.push_back(K.left_mul_matrix(K.unit(i)));
        rmul.push_back(K.right_mul_matrix(K.unit(i)));
    }
    FpMatrix ann_res = r.annK_J.residual_map();
    FpMatrix jcap_res = r.J_cap_centerK.residual_map();
    FpMatrix j_res = r.J.space.residual_map();

    auto codomain = [&](std::size_t map, const std::string& cond, const FpMatrix& res) {
        std::size_t d = sys.domain_dim(sys.roles()[map].domain);
        for (std::size_t k = 0; k < d; ++k) {
            FpVec dom = sys.roles()[map].domain == MapDomain::K ? K.unit(k) : junit(k);
            std::string w = sys.roles()[map].domain == MapDomain::K ? klabel(k) : jlabel(k);
            sys.equation(cond, w, {{map, dom, &res, false}});
        }
    };
    auto vanish_on_J = [&](std::size_t map, const std::string& cond) {
        // domain is K; require map(y) = 0 for every basis y of J
        for (std::size_t k = 0; k < tj; ++k)
            sys.equation(cond, jlabel(k), {{map, jvec_in_K(k), nullptr, false}});
    };
    auto vanish_on_J2 = [&](std::size_t map, const std::string& cond) {
        // domain is J; require map(w) = 0 for every basis w of J^2
        for (std::size_t k = 0; k < r.J.square.dim(); ++k) {
            FpVec w = j_coords(r, r.J.square.basis[k]);
            sys.equation(cond, "jsq" + std::to_string(k), {{map, w, nullptr, false}});
        }
    };

    switch (kind) {
    case FamilyKind::Inner:
    case FamilyKind::Diagonal:
        break;

    case FamilyKind::Ring: {
        const std::size_t th = 0;
        for (std::size_t a = 0; a < K.dim; ++a)
            for (std::size_t b = 0; b < K.dim; ++b) {
                FpVec ab = K.mul(K.unit(a), K.unit(b));
                sys.equation("theta(a*b) = theta(a)*b + a*theta(b)",
                             "(" + klabel(a) + "," + klabel(b) + ")",
                             {{th, ab, nullptr, false},
                              {th, K.unit(a), &rmul[b], true},
                              {th, K.unit(b), &lmul[a], true}});
            }
        for (std::size_t k = 0; k < tj; ++k)
            sys.equation("theta(J) subset J", jlabel(k),
                         {{th, jvec_in_K(k), &j_res, false}});
        break;
    }

    case FamilyKind::AlmostAnnihilator: {
        const std::size_t al = 0, be = 1;
        for (std::size_t x = 0; x < K.dim; ++x)
            for (std::size_t y = 0; y < tj; ++y) {
                FpVec xy = j_coords(r, K.mul(K.unit(x), jvec_in_K(y)));
                FpVec yx = j_coords(r, K.mul(jvec_in_K(y), K.unit(x)));
                sys.equation("alpha(x*y) = x*alpha(y)",
                             "(" + klabel(x) + "," + jlabel(y) + ")",
                             {{al, xy, nullptr, false}, {al, junit(y), &lmul[x], true}});
                sys.equation("beta(y*x) = beta(y)*x",
                             "(" + klabel(x) + "," + jlabel(y) + ")",
                             {{be, yx, nullptr, false}, {be, junit(y), &rmul[x], true}});
            }
        for (std::size_t y = 0; y < tj; ++y)
            for (std::size_t z = 0; z < tj; ++z) {
                FpMatrix rz = K.right_mul_matrix(jvec_in_K(z));
                FpMatrix ly = K.left_mul_matrix(jvec_in_K(y));
                sys.equation("alpha(y)*z + y*beta(z) = 0",
                             "(" + jlabel(y) + "," + jlabel(z) + ")",
                             {{al, junit(y), &rz, false}, {be, junit(z), &ly, false}});
            }
        codomain(al, "alpha maps into J", j_res);
        codomain(be, "beta maps into J", j_res);
        break;
    }

    case FamilyKind::CentralLie: {
        auto s_role = [&](std::size_t i) { return i - 1; };          // s_i, i = 1..n
        auto a_role = [&](std::size_t i) { return n + i - 1; };      // a_i, i = 1..n
        const std::size_t u_role = 2 * n;
        const std::size_t v_role = 2 * n + 1;
        for (std::size_t i = 1; i < n; ++i) {
            vanish_on_J(s_role(i), "s" + std::to_string(i) + "(J) = 0");
            vanish_on_J(a_role(i), "a" + std::to_string(i) + "(J) = 0");
        }
        vanish_on_J2(s_role(n), "s" + std::to_string(n) + "(J^2) = 0");
        vanish_on_J2(a_role(n), "a" + std::to_string(n) + "(J^2) = 0");
        for (std::size_t x = 0; x < K.dim; ++x)
            for (std::size_t y = 0; y < tj; ++y) {
                FpVec xy = j_coords(r, K.mul(K.unit(x), jvec_in_K(y)));
                FpVec yx = j_coords(r, K.mul(jvec_in_K(y), K.unit(x)));
                std::string w = "(" + klabel(x) + "," + jlabel(y) + ")";
                sys.equation("u(x*y) = u(y*x)", w,
                             {{u_role, xy, nullptr, false}, {u_role, yx, nullptr, true}});
                sys.equation("v(x*y) = v(y*x)", w,
                             {{v_role, xy, nullptr, false}, {v_role, yx, nullptr, true}});
            }
        for (std::size_t i = 1; i <= n; ++i) {
            codomain(s_role(i), "s" + std::to_string(i) + " maps into Ann_K(J)", ann_res);
            codomain(a_role(i), "a" + std::to_string(i) + " maps into J∩C(K)", jcap_res);
        }
        codomain(u_role, "u maps into Ann_K(J)", ann_res);
        codomain(v_role, "v maps into J∩C(K)", jcap_res);
        break;
    }

    case FamilyKind::SpecialI: {
        const std::size_t ga = 0, th = 1;
        vanish_on_J(ga, "gamma(J) = 0");
        vanish_on_J(th, "theta(J) = 0");
        for (std::size_t a = 0; a < K.dim; ++a)
            for (std::size_t b = a; b < K.dim; ++b) {
                sys.equation("gamma(x1)*x2 = gamma(x2)*x1",
                             "(" + klabel(a) + "," + klabel(b) + ")",
                             {{ga, K.unit(a), &rmul[b], false},
                              {ga, K.unit(b), &rmul[a], true}});
                sys.equation("x1*theta(x2) = x2*theta(x1)",
                             "(" + klabel(a) + "," + klabel(b) + ")",
                             {{th, K.unit(b), &lmul[a], false},
                              {th, K.unit(a), &lmul[b], true}});
            }
        codomain(ga, "gamma maps into Ann_K(J)", ann_res);
        codomain(th, "theta maps into Ann_K(J)", ann_res);
        break;
    }

    case FamilyKind::SpecialII: {
        const std::size_t al = 0, be = 1, ga = 2;
        vanish_on_J2(al, "alpha(J^2) = 0");
        vanish_on_J2(be, "beta(J^2) = 0");
        vanish_on_J2(ga, "gamma(J^2) = 0");
        for (std::size_t x = 0; x < K.dim; ++x)
            for (std::size_t y = 0; y < tj; ++y) {
                FpVec xy = j_coords(r, K.mul(K.unit(x), jvec_in_K(y)));
                FpVec yx = j_coords(r, K.mul(jvec_in_K(y), K.unit(x)));
                std::string w = "(" + klabel(x) + "," + jlabel(y) + ")";
                sys.equation("alpha(y*x) = x*alpha(y)", w,
                             {{al, yx, nullptr, false}, {al, junit(y), &lmul[x], true}});
                sys.equation("beta(y*x) = x*beta(y)", w,
                             {{be, yx, nullptr, false}, {be, junit(y), &lmul[x], true}});
                sys.equation("beta(x*y) = beta(y)*x", w,
                             {{be, xy, nullptr, false}, {be, junit(y), &rmul[x], true}});
                sys.equation("gamma(x*y) = gamma(y)*x", w,
                             {{ga, xy, nullptr, false}, {ga, junit(y), &rmul[x], true}});
            }
        codomain(al, "alpha maps into Ann_K(J)", ann_res);
        codomain(be, "beta maps into Ann_K(J)", ann_res);
        codomain(ga, "gamma maps into Ann_K(J)", ann_res);
        break;
    }

    case FamilyKind::SpecialIII: {
        const std::size_t al = 0, ga = 1;
        vanish_on_J2(al, "alpha(J^2) = 0");
        vanish_on_J2(ga, "gamma(J^2) = 0");
        for (std::size_t x = 0; x < K.dim; ++x)
            for (std::size_t y = 0; y < tj; ++y) {
                FpVec xy = j_coords(r, K.mul(K.unit(x), jvec_in_K(y)));
                FpVec yx = j_coords(r, K.mul(jvec_in_K(y), K.unit(x)));
                std::string w = "(" + klabel(x) + "," + jlabel(y) + ")";
                sys.equation("alpha(y*x) = x*alpha(y)", w,
                             {{al, yx, nullptr, false}, {al, junit(y), &lmul[x], true}});
                sys.equation("gamma(x*y) = gamma(y)*x", w,
                             {{ga, xy, nullptr, false}, {ga, junit(y), &rmul[x], true}});
            }
        codomain(al, "alpha maps into Ann_K(J)", ann_res);
        codomain(ga, "gamma maps into Ann_K(J)", ann_res);
        break;
    }
    }
    return sys;
}

inline void check_family_size(FamilyKind kind, std::size_t n) {
    if (!family_admissible(kind, n))
        fail(Errc::WrongSize, std::string(family_name(kind)) + " is not defined for n = " +
                                  std::to_string(n));
}

} // namespace detail

/// Check every side-condition of the family on a spanning set. Returns the
/// violated conditions with witnesses; never throws on condition failures.
inline std::vector<Violation> validate_family_params(const FamilyParams& params,
                                                     const RRing& r) {
    std::vector<Violation> out;
    if (!family_admissible(params.kind, r.n)) {
        out.push_back({"family defined for this n", "n = " + std::to_string(r.n)});
        return out;
    }
    if (params.kind == FamilyKind::Inner) {
        if (params.inner_entries.size() != r.n * r.n) {
            out.push_back({"A in R", "entry grid is not n*n"});
            return out;
        }
        for (std::size_t i = 0; i < r.n; ++i)
            for (std::size_t j = 0; j < r.n; ++j) {
                const FpVec& v = params.inner_entries[i * r.n + j];
                if (v.size() != r.K.dim) {
                    out.push_back({"A in R", "entry is not a K-vector"});
                    return out;
                }
                if (r.j_position(i, j) && !r.J.space.member(v)) {
                    out.push_back({"A in R", "position (" + std::to_string(i + 1) + "," +
                                                 std::to_string(j + 1) + ") requires J"});
                    return out;
                }
            }
        return out;
    }
    if (params.kind == FamilyKind::Diagonal) {
        if (params.diagonal.size() != r.n)
            out.push_back({"d has n diagonal entries", "got " +
                                                           std::to_string(params.diagonal.size())});
        for (const FpVec& d : params.diagonal)
            if (d.size() != r.K.dim) {
                out.push_back({"d entries are K-vectors", "wrong length"});
                break;
            }
        return out;
    }

    detail::ParamSystem sys = detail::family_conditions(r, params.kind);
    const auto& roles = sys.roles();
    if (params.maps.size() != roles.size()) {
        out.push_back({"map role count", "expected " + std::to_string(roles.size()) +
                                             " maps, got " + std::to_string(params.maps.size())});
        return out;
    }
    for (std::size_t m = 0; m < roles.size(); ++m) {
        const LinMap& lm = params.maps[m];
        if (lm.domain != roles[m].domain || lm.mat.rows != r.K.dim ||
            lm.mat.cols != sys.domain_dim(roles[m].domain)) {
            out.push_back({"map shape", roles[m].name});
            return out;
        }
    }
    FpVec packed = sys.pack(params.maps);
    std::vector<std::string> seen;
    for (const detail::ParamEquation& eq : sys.equations()) {
        bool violated = false;
        for (const FpVec& row : eq.rows) {
            u64 acc = 0;
            for (std::size_t i = 0; i < row.size(); ++i) acc += u64(row[i]) * packed[i];
            if (acc % r.p != 0) {
                violated = true;
                break;
            }
        }
        if (violated &&
            std::find(seen.begin(), seen.end(), eq.condition) == seen.end()) {
            seen.push_back(eq.condition);
            out.push_back({eq.condition, eq.witness});
        }
    }
    return out;
}

/// F_p-linear combination of same-kind parameters (the parameter spaces are
/// linear; build_family is linear in them).
inline FamilyParams params_linear_combination(const std::vector<FamilyParams>& basis,
                                              const FpVec& coeffs, const RRing& r) {
    if (basis.empty()) fail(Errc::InvalidParams, "empty parameter basis");
    if (coeffs.size() != basis.size())
        fail(Errc::DimensionMismatch, "coefficient count does not match basis size");
    FamilyParams out = basis[0];
    auto scale_assign = [&](FpVec& dst, const FpVec& src, u32 c) {
        for (std::size_t i = 0; i < dst.size(); ++i)
            dst[i] = fp_add(dst[i], fp_mul(c, src[i], r.p), r.p);
    };
    if (out.kind == FamilyKind::Inner) {
        out.inner_entries.assign(r.n * r.n, r.K.zero());
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (std::size_t e = 0; e < out.inner_entries.size(); ++e)
                scale_assign(out.inner_entries[e], basis[b].inner_entries[e], coeffs[b]);
    } else if (out.kind == FamilyKind::Diagonal) {
        out.diagonal.assign(r.n, r.K.zero());
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (std::size_t e = 0; e < out.diagonal.size(); ++e)
                scale_assign(out.diagonal[e], basis[b].diagonal[e], coeffs[b]);
    } else {
        for (LinMap& m : out.maps) m.mat.a.assign(m.mat.a.size(), 0);
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (std::size_t m = 0; m < out.maps.size(); ++m)
                scale_assign(out.maps[m].mat.a, basis[b].maps[m].mat.a, coeffs[b]);
    }
    return out;
}

/// Basis of the space of admissible parameters: all side-conditions are
/// linear in the map entries, so the space is the kernel of their stacked
/// rows. Each basis vector comes back packaged as FamilyParams.
inline std::vector<FamilyParams> family_parameter_space(FamilyKind kind, const RRing& r) {
    detail::check_family_size(kind, r.n);
    std::vector<FamilyParams> out;
    if (kind == FamilyKind::Inner) {
        for (std::size_t a = 0; a < r.D; ++a) {
            FamilyParams p;
            p.kind = kind;
            p.inner_entries.assign(r.n * r.n, r.K.zero());
            const RRing::Atom& at = r.basis[a];
            p.inner_entries[at.i * r.n + at.j] = at.kvec;
            out.push_back(std::move(p));
        }
        return out;
    }
    if (kind == FamilyKind::Diagonal) {
        for (std::size_t i = 0; i < r.n; ++i)
            for (std::size_t k = 0; k < r.K.dim; ++k) {
                FamilyParams p;
                p.kind = kind;
                p.diagonal.assign(r.n, r.K.zero());
                p.diagonal[i] = r.K.unit(k);
                out.push_back(std::move(p));
            }
        return out;
    }
    detail::ParamSystem sys = detail::family_conditions(r, kind);
    RrefAccumulator acc(r.p, sys.total());
    for (const detail::ParamEquation& eq : sys.equations())
        for (const FpVec& row : eq.rows) acc.add_row(row);
    FpMatrix kmat = kernel(acc.to_matrix());
    for (std::size_t i = 0; i < kmat.rows; ++i) {
        FamilyParams p;
        p.kind = kind;
        p.maps = sys.unpack(kmat.row_vec(i));
        out.push_back(std::move(p));
    }
    return out;
}

/// Realize the family's map table as an endomorphism of R in basis
/// coordinates. Parameters are validated first; InvalidParams carries the
/// first violated condition.
inline AdditiveEndo build_family(const FamilyParams& params, const RRing& r) {
    detail::check_family_size(params.kind, r.n);
    std::vector<Violation> viol = validate_family_params(params, r);
    if (!viol.empty())
        fail(Errc::InvalidParams,
             std::string(family_name(params.kind)) + ": " + viol[0].condition +
                 " violated at " + viol[0].witness);

    const std::size_t n = r.n;
    AdditiveEndo e = AdditiveEndo::zero(r);

    FpVec inner_coords;
    if (params.kind == FamilyKind::Inner)
        inner_coords = rmatrix_coords(make_rmatrix(r, params.inner_entries));

    for (std::size_t a = 0; a < r.D; ++a) {
        const RRing::Atom& at = r.basis[a];
        const std::size_t pi = at.i, pj = at.j;
        FpVec img_coords;

        switch (params.kind) {
        case FamilyKind::Inner: {
            FpVec acc(r.D, 0);
            for (std::size_t c = 0; c < r.D; ++c)
                if (inner_coords[c] != 0)
                    vec_axpy(acc, inner_coords[c], r.brk_table[c][a], r.p);
            img_coords = std::move(acc);
            break;
        }
        case FamilyKind::Diagonal: {
            FpVec v = r.K.mul(params.diagonal[pi], at.kvec);
            vec_sub_inplace(v, r.K.mul(at.kvec, params.diagonal[pj]), r.p);
            img_coords = rmatrix_coords(unit_rmatrix(r, pi, pj, v));
            break;
        }
        case FamilyKind::Ring: {
            FpVec v = params.maps[0].apply(at.kvec);
            img_coords = rmatrix_coords(unit_rmatrix(r, pi, pj, v));
            break;
        }
        case FamilyKind::AlmostAnnihilator: {
            RMatrix img = zero_rmatrix(r);
            FpVec y(r.J.dim(), 0);
            if (r.j_position(pi, pj)) y[at.k] = 1;
            const LinMap& alpha = params.maps[0];
            const LinMap& beta = params.maps[1];
            if (pi == 0 && pj == n - 1) {
                vec_add_inplace(img.at(0, 0), alpha.apply(y), r.p);
                vec_add_inplace(img.at(n - 1, n - 1), beta.apply(y), r.p);
            } else if (pj == n - 1 && pi >= 1) {
                vec_add_inplace(img.at(pi, 0), alpha.apply(y), r.p);
            } else if (pi == 0 && pj <= n - 2) {
                vec_add_inplace(img.at(n - 1, pj), beta.apply(y), r.p);
            }
            img_coords = rmatrix_coords(img);
            break;
        }
        case FamilyKind::CentralLie: {
            RMatrix img = zero_rmatrix(r);
            auto s_map = [&](std::size_t i) -> const LinMap& { return params.maps[i - 1]; };
            auto a_map = [&](std::size_t i) -> const LinMap& { return params.maps[n + i - 1]; };
            const LinMap& u = params.maps[2 * n];
            const LinMap& v = params.maps[2 * n + 1];
            if (pi == pj + 1) {
                // subdiagonal (i+1, i), 1-based index i = pi
                FpVec aval = a_map(pi).apply(at.kvec);
                for (std::size_t d = 0; d < n; ++d) vec_add_inplace(img.at(d, d), aval, r.p);
                vec_add_inplace(img.at(n - 1, 0), s_map(pi).apply(at.kvec), r.p);
            } else if (pi == pj) {
                FpVec y(r.J.dim(), 0);
                y[at.k] = 1;
                vec_add_inplace(img.at(n - 1, 0), u.apply(y), r.p);
                FpVec vval = v.apply(y);
                for (std::size_t d = 0; d < n; ++d) vec_add_inplace(img.at(d, d), vval, r.p);
            } else if (pi == 0 && pj == n - 1) {
                FpVec y(r.J.dim(), 0);
                y[at.k] = 1;
                FpVec aval = a_map(n).apply(y);
                for (std::size_t d = 0; d < n; ++d) vec_add_inplace(img.at(d, d), aval, r.p);
                vec_add_inplace(img.at(n - 1, 0), s_map(n).apply(y), r.p);
            }
            img_coords = rmatrix_coords(img);
            break;
        }
        case FamilyKind::SpecialI: {
            RMatrix img = zero_rmatrix(r);
            if (pi == 1 && pj == 0)
                vec_add_inplace(img.at(n - 1, 1), params.maps[0].apply(at.kvec), r.p);
            else if (pi == n - 1 && pj == n - 2)
                vec_add_inplace(img.at(n - 2, 0), params.maps[1].apply(at.kvec), r.p);
            img_coords = rmatrix_coords(img);
            break;
        }
        case FamilyKind::SpecialII: {
            RMatrix img = zero_rmatrix(r);
            FpVec y(r.J.dim(), 0);
            if (r.j_position(pi, pj)) y[at.k] = 1;
            const LinMap& alpha = params.maps[0];
            const LinMap& beta = params.maps[1];
            const LinMap& gamma = params.maps[2];
            auto sub = [&](FpVec& dst, const FpVec& v) { vec_sub_inplace(dst, v, r.p); };
            if (pi == 0 && pj == n - 1) {
                vec_add_inplace(img.at(n - 2, 0), alpha.apply(y), r.p);
                vec_add_inplace(img.at(n - 2, 1), beta.apply(y), r.p);
                vec_add_inplace(img.at(n - 1, 1), gamma.apply(y), r.p);
            } else if (pi == 0 && pj == n - 2) {
                sub(img.at(n - 1, 0), alpha.apply(y));
                sub(img.at(n - 1, 1), beta.apply(y));
            } else if (pi == 1 && pj == n - 1) {
                sub(img.at(n - 2, 0), beta.apply(y));
                sub(img.at(n - 1, 0), gamma.apply(y));
            } else if (pi == 1 && pj == n - 2) {
                vec_add_inplace(img.at(n - 1, 0), beta.apply(y), r.p);
            }
            img_coords = rmatrix_coords(img);
            break;
        }
        case FamilyKind::SpecialIII: {
            RMatrix img = zero_rmatrix(r);
            FpVec y(r.J.dim(), 0);
            if (r.j_position(pi, pj)) y[at.k] = 1;
            const LinMap& alpha = params.maps[0];
            const LinMap& gamma = params.maps[1];
            if (pi == 0 && pj == 2) {
                vec_add_inplace(img.at(1, 0), alpha.apply(y), r.p);
                vec_add_inplace(img.at(2, 1), gamma.apply(y), r.p);
            } else if (pi == 0 && pj == 1) {
                vec_sub_inplace(img.at(2, 0), alpha.apply(y), r.p);
            } else if (pi == 1 && pj == 2) {
                vec_sub_inplace(img.at(2, 0), gamma.apply(y), r.p);
            }
            img_coords = rmatrix_coords(img);
            break;
        }
        }

        for (std::size_t row = 0; row < r.D; ++row) e.m.at(row, a) = img_coords[row];
    }
    return e;
}

struct LieCheckResult {
    bool ok = true;
    std::size_t a = 0, b = 0;  // first violating ordered basis pair
    FpVec defect;              // Delta([a,b]) - [Delta a, b] - [a, Delta b]
    std::string describe(const RRing& r) const {
        if (ok) return "ok";
        return "Lie rule fails on (" + r.atom_label(a) + ", " + r.atom_label(b) + ")";
    }
};

/// Does the endomorphism satisfy Delta(x*y) = Delta(x)*y + x*Delta(y) for
/// the Lie product on every ordered basis pair? Sufficient by bilinearity.
inline LieCheckResult is_lie_derivation(const AdditiveEndo& e) {
    const RRing& r = *e.ring;
    for (std::size_t a = 0; a < r.D; ++a) {
        FpVec col_a = e.m.col_vec(a);
        for (std::size_t b = 0; b < r.D; ++b) {
            FpVec lhs = e.m.matvec(r.brk_table[a][b]);
            FpVec rhs(r.D, 0);
            for (std::size_t i = 0; i < r.D; ++i)
                if (col_a[i] != 0) vec_axpy(rhs, col_a[i], r.brk_table[i][b], r.p);
            for (std::size_t j = 0; j < r.D; ++j) {
                u32 c = e.m.at(j, b);
                if (c != 0) vec_axpy(rhs, c, r.brk_table[a][j], r.p);
            }
            vec_sub_inplace(lhs, rhs, r.p);
            if (!vec_is_zero(lhs)) return LieCheckResult{false, a, b, std::move(lhs)};
        }
    }
    return LieCheckResult{};
}

/// Full (ring) derivation rule Delta(xy) = Delta(x)y + x Delta(y) on basis
/// pairs; strictly stronger than the Lie rule.
inline LieCheckResult satisfies_derivation_rule(const AdditiveEndo& e) {
    const RRing& r = *e.ring;
    for (std::size_t a = 0; a < r.D; ++a) {
        FpVec col_a = e.m.col_vec(a);
        for (std::size_t b = 0; b < r.D; ++b) {
            FpVec lhs = e.m.matvec(r.prod_table[a][b]);
            FpVec rhs(r.D, 0);
            for (std::size_t i = 0; i < r.D; ++i)
                if (col_a[i] != 0) vec_axpy(rhs, col_a[i], r.prod_table[i][b], r.p);
            for (std::size_t j = 0; j < r.D; ++j) {
                u32 c = e.m.at(j, b);
                if (c != 0) vec_axpy(rhs, c, r.prod_table[a][j], r.p);
            }
            vec_sub_inplace(lhs, rhs, r.p);
            if (!vec_is_zero(lhs)) return LieCheckResult{false, a, b, std::move(lhs)};
        }
    }
    return LieCheckResult{};
}

struct ShapeCheckResult {
    bool ok = true;
    std::string detail;
};

/// Support and diagonal-component constraints that hold for every Lie
/// derivation of R: images of subdiagonal generators live on their row,
/// column, the diagonal and the (n,1) corner (with the stated extras at
/// (2,1) and (n,n-1)), images of J e_{1,n} live on row 1, column n, the
/// diagonal and four corner positions, and all off-position diagonal
/// components agree and take central values.
inline ShapeCheckResult lemma1_shape_check(const AdditiveEndo& e) {
    const RRing& r = *e.ring;
    const std::size_t n = r.n;

    auto check_support = [&](std::size_t i, std::size_t j, auto allowed,
                             const char* which) -> std::optional<ShapeCheckResult> {
        std::size_t off = r.offset(i, j), d = r.local_dim(i, j);
        for (std::size_t k = 0; k < d; ++k) {
            RMatrix img = rmatrix_from_coords(r, e.m.col_vec(off + k));
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t t = 0; t < n; ++t) {
                    if (allowed(s, t)) continue;
                    if (!vec_is_zero(img.at(s, t)))
                        return ShapeCheckResult{
                            false, std::string(which) + ": image of basis " +
                                       std::to_string(k) + " at position (" +
                                       std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                       ") has support at (" + std::to_string(s + 1) + "," +
                                       std::to_string(t + 1) + ")"};
                }
        }
        return std::nullopt;
    };

    // subdiagonal positions (i+1, i); 0-based row index pi = 1..n-1
    for (std::size_t pi = 1; pi < n; ++pi) {
        std::size_t pj = pi - 1;
        std::optional<ShapeCheckResult> v;
        if (pi == 1) {
            v = check_support(pi, pj,
                              [&](std::size_t s, std::size_t t) {
                                  return s == 1 || t == 0 || s == t ||
                                         (s == n - 1 && t == 1) || (s == n - 1 && t == 2);
                              },
                              "display for x e_{2,1}");
        } else if (pi == n - 1) {
            v = check_support(pi, pj,
                              [&](std::size_t s, std::size_t t) {
                                  return s == n - 1 || t == n - 2 || s == t ||
                                         (s == n - 3 && t == 0) || (s == n - 2 && t == 0);
                              },
                              "display for x e_{n,n-1}");
        } else {
            v = check_support(pi, pj,
                              [&](std::size_t s, std::size_t t) {
                                  return s == pi || t == pj || s == t ||
                                         (s == n - 1 && t == 0);
                              },
                              "display (1)");
        }
        if (v) return *v;
    }

    // corner position (1, n)
    if (auto v = check_support(0, n - 1,
                               [&](std::size_t s, std::size_t t) {
                                   return s == 0 || t == n - 1 || s == t ||
                                          (s == n - 2 && t == 0) || (s == n - 2 && t == 1) ||
                                          (s == n - 1 && t == 0) || (s == n - 1 && t == 1);
                               },
                               "display (2)"))
        return *v;

    // display (3): off-position diagonal components agree and are central
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t off = r.offset(i, j), d = r.local_dim(i, j);
            for (std::size_t k = 0; k < d; ++k) {
                RMatrix img = rmatrix_from_coords(r, e.m.col_vec(off + k));
                const FpVec* first = nullptr;
                for (std::size_t s = 0; s < n; ++s) {
                    if (s == i || s == j) continue;
                    const FpVec& v = img.at(s, s);
                    if (!r.centerK.member(v))
                        return ShapeCheckResult{
                            false, "display (3): diagonal component (" +
                                       std::to_string(s + 1) + "," + std::to_string(s + 1) +
                                       ") of the image of basis " + std::to_string(k) +
                                       " at (" + std::to_string(i + 1) + "," +
                                       std::to_string(j + 1) + ") is not central"};
                    if (first == nullptr)
                        first = &v;
                    else if (*first != v)
                        return ShapeCheckResult{
                            false, "display (3): diagonal components of the image of basis " +
                                       std::to_string(k) + " at (" + std::to_string(i + 1) +
                                       "," + std::to_string(j + 1) + ") differ"};
                }
            }
        }

    return ShapeCheckResult{};
}

} // namespace ntlie
