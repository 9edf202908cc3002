#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ntlie/families.hpp"

namespace ntlie {

/// Pipeline stages of the decomposition, in execution order. Basic bundles
/// the diagonal derivation and the two inner derivations extracted from the
/// subdiagonal generators.
enum class Stage {
    Basic,
    Central,
    Ring,
    SpecialI,
    SpecialIII,
    InnerC,
    AlmostAnnihilator,
    SpecialII,
    Final,
};

inline const char* stage_name(Stage s) {
    switch (s) {
    case Stage::Basic: return "basic";
    case Stage::Central: return "central";
    case Stage::Ring: return "ring";
    case Stage::SpecialI: return "special_i";
    case Stage::SpecialIII: return "special_iii";
    case Stage::InnerC: return "inner_c";
    case Stage::AlmostAnnihilator: return "almost_annihilator";
    case Stage::SpecialII: return "special_ii";
    case Stage::Final: return "final";
    }
    return "?";
}

struct StageCheck {
    Stage stage;
    bool ok;
    std::string detail;  // empty when ok
};

struct Decomposition {
    std::vector<std::pair<FamilyParams, AdditiveEndo>> components;
    AdditiveEndo residual;
    std::vector<StageCheck> stage_log;

    bool residual_zero() const { return residual.is_zero(); }

    bool all_stage_checks_ok() const {
        for (const StageCheck& c : stage_log)
            if (!c.ok) return false;
        return true;
    }

    /// Sum of all components plus the residual (must reproduce the input).
    AdditiveEndo reconstruct() const {
        AdditiveEndo sum = residual;
        for (const auto& [params, endo] : components) sum.add_inplace(endo);
        return sum;
    }
};

namespace detail {

inline RMatrix psi_image(const AdditiveEndo& psi, std::size_t i, std::size_t j,
                         const FpVec& x) {
    return psi.apply(unit_rmatrix(*psi.ring, i, j, x));
}

inline std::string pos_str(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

/// Check that the image of every basis element of I_{i,j} e_{i,j} is
/// supported inside `allowed`.
template <class Allowed>
inline std::optional<std::string> support_violation(const AdditiveEndo& psi, std::size_t i,
                                                    std::size_t j, Allowed allowed) {
    const RRing& r = *psi.ring;
    std::size_t off = r.offset(i, j), d = r.local_dim(i, j);
    for (std::size_t k = 0; k < d; ++k) {
        RMatrix img = rmatrix_from_coords(r, psi.m.col_vec(off + k));
        for (std::size_t s = 0; s < r.n; ++s)
            for (std::size_t t = 0; t < r.n; ++t) {
                if (allowed(s, t)) continue;
                if (!vec_is_zero(img.at(s, t)))
                    return "image of basis " + std::to_string(k) + " at " + pos_str(i, j) +
                           " has unexpected support at " + pos_str(s, t);
            }
    }
    return std::nullopt;
}

/// Check that one named entry of every image from position (i,j) vanishes.
inline std::optional<std::string> entry_violation(const AdditiveEndo& psi, std::size_t i,
                                                  std::size_t j, std::size_t s,
                                                  std::size_t t) {
    const RRing& r = *psi.ring;
    std::size_t off = r.offset(i, j), d = r.local_dim(i, j);
    for (std::size_t k = 0; k < d; ++k) {
        RMatrix img = rmatrix_from_coords(r, psi.m.col_vec(off + k));
        if (!vec_is_zero(img.at(s, t)))
            return "entry " + pos_str(s, t) + " of the image of basis " + std::to_string(k) +
                   " at " + pos_str(i, j) + " is nonzero";
    }
    return std::nullopt;
}

} // namespace detail

/// Verify the support pattern the proof establishes for the running residual
/// right after the given stage. Returns the first violation, if any; this is
/// cross-validation, not control flow.
inline std::optional<std::string> assert_stage_pattern(Stage stage, const AdditiveEndo& psi) {
    const RRing& r = *psi.ring;
    const std::size_t n = r.n;
    using detail::entry_violation;
    using detail::support_violation;

    switch (stage) {
    case Stage::Basic: {
        // at coefficient 1: images of e_{i+1,i} live on row i+1, the main
        // diagonal and the (n,1) corner, with the subdiagonal entry, the
        // (i+1,1) entry and the off-diagonal i-th column killed by the
        // diagonal and inner subtractions
        for (std::size_t i = 1; i < n; ++i) {
            RMatrix img = detail::psi_image(psi, i, i - 1, r.K.one);
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t t = 0; t < n; ++t) {
                    bool allowed = s == i || s == t || (s == n - 1 && t == 0);
                    if (i == 1 && s == n - 1 && (t == 1 || t == 2)) allowed = true;
                    if (i == n - 1 && t == 0 && (s == n - 2 || s + 2 == n - 1))
                        allowed = true;
                    if (s == i && t == i - 1) allowed = false;
                    if (i >= 2 && s == i && t == 0) allowed = false;
                    if (t == i - 1 && s != i - 1 && s != i) allowed = false;
                    if (!allowed && !vec_is_zero(img.at(s, t)))
                        return "after basic: image of e" + detail::pos_str(i, i - 1) +
                               " has support at " + detail::pos_str(s, t);
                }
        }
        return std::nullopt;
    }

    case Stage::Central: {
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t off = r.offset(i, i - 1), d = r.local_dim(i, i - 1);
            for (std::size_t k = 0; k < d; ++k) {
                RMatrix img = rmatrix_from_coords(r, psi.m.col_vec(off + k));
                for (std::size_t s = 0; s < n; ++s)
                    if (s != i - 1 && s != i && !vec_is_zero(img.at(s, s)))
                        return "after central: diagonal entry " + detail::pos_str(s, s) +
                               " of the image of basis " + std::to_string(k) + " at " +
                               detail::pos_str(i, i - 1) + " is nonzero";
                if (!vec_is_zero(img.at(n - 1, 0)))
                    return "after central: corner entry of the image at " +
                           detail::pos_str(i, i - 1) + " is nonzero";
            }
        }
        if (r.J.dim() > 0) {
            std::size_t off = r.offset(0, n - 1);
            for (std::size_t k = 0; k < r.J.dim(); ++k) {
                RMatrix img = rmatrix_from_coords(r, psi.m.col_vec(off + k));
                for (std::size_t s = 1; s + 1 < n; ++s)
                    if (!vec_is_zero(img.at(s, s)))
                        return "after central: diagonal entry " + detail::pos_str(s, s) +
                               " of the image at (1,n) is nonzero";
                if (!vec_is_zero(img.at(n - 1, 0)))
                    return "after central: corner entry of the image at (1,n) is nonzero";
            }
            // independence of the diagonal witness position for u
            for (std::size_t jd = 1; jd + 1 < n; ++jd)
                if (auto v = entry_violation(psi, jd, jd, n - 1, 0))
                    return "after central: " + *v;
            // off-position diagonal components of diagonal inputs are dead at
            // every diagonal position (validates the trace-fed identity part)
            for (std::size_t jd = 0; jd < n; ++jd) {
                std::size_t off = r.offset(jd, jd);
                for (std::size_t k = 0; k < r.J.dim(); ++k) {
                    RMatrix img = rmatrix_from_coords(r, psi.m.col_vec(off + k));
                    for (std::size_t s = 0; s < n; ++s)
                        if (s != jd && !vec_is_zero(img.at(s, s)))
                            return "after central: diagonal entry " + detail::pos_str(s, s) +
                                   " of the image of basis " + std::to_string(k) + " at " +
                                   detail::pos_str(jd, jd) + " is nonzero";
                }
            }
        }
        return std::nullopt;
    }

    case Stage::Ring: {
        // position-independence of the entrywise component: the (i,j) entry
        // of the image from every position dies after one single extraction
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (auto v = entry_violation(psi, i, j, i, j))
                    return "after ring: " + *v;
        return std::nullopt;
    }

    case Stage::SpecialI: {
        if (auto v = entry_violation(psi, 1, 0, n - 1, 1)) return "after special_i: " + *v;
        if (auto v = entry_violation(psi, n - 1, n - 2, n - 2, 0))
            return "after special_i: " + *v;
        return std::nullopt;
    }

    case Stage::SpecialIII: {
        if (auto v = support_violation(
                psi, 1, 0, [](std::size_t s, std::size_t t) {
                    return (s == 0 && t == 0) || (s == 1 && t == 1);
                }))
            return "after special_iii: " + *v;
        if (auto v = support_violation(
                psi, 2, 1, [](std::size_t s, std::size_t t) {
                    return (s == 1 && t == 1) || (s == 2 && t == 2);
                }))
            return "after special_iii: " + *v;
        if (auto v = support_violation(
                psi, 2, 0, [](std::size_t s, std::size_t t) {
                    return (s == 1 && t == 0) || (s == 2 && t == 1);
                }))
            return "after special_iii: " + *v;
        return std::nullopt;
    }

    case Stage::InnerC: {
        for (std::size_t i = 1; i < n; ++i) {
            RMatrix img = detail::psi_image(psi, i, i - 1, r.K.one);
            if (!vec_is_zero(img.at(i - 1, i - 1)))
                return "after inner_c: entry " + detail::pos_str(i - 1, i - 1) +
                       " of the image of e" + detail::pos_str(i, i - 1) + " is nonzero";
        }
        // equation (*): the residual kills every strictly lower input
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (auto v = support_violation(psi, i, j,
                                               [](std::size_t, std::size_t) { return false; }))
                    return "after inner_c (*): " + *v;
        if (n >= 4) {
            if (auto v = support_violation(psi, 0, n - 1, [&](std::size_t s, std::size_t t) {
                    return (s == 0 && t == 0) || (s == n - 2 && t == 0) ||
                           (s == n - 2 && t == 1) || (s == n - 1 && t == 1) ||
                           (s == n - 1 && t == n - 1);
                }))
                return "after inner_c: " + *v;
        }
        return std::nullopt;
    }

    case Stage::AlmostAnnihilator: {
        for (std::size_t c = 0; c < n; ++c) {
            if (auto v = entry_violation(psi, 0, c, n - 1, c))
                return "after almost_annihilator: " + *v;
            if (auto v = entry_violation(psi, c, n - 1, c, 0))
                return "after almost_annihilator: " + *v;
        }
        if (n == 3) {
            if (auto v = support_violation(psi, 0, 2,
                                           [](std::size_t, std::size_t) { return false; }))
                return "after almost_annihilator: " + *v;
        }
        return std::nullopt;
    }

    case Stage::SpecialII:
    case Stage::Final: {
        if (!psi.is_zero()) {
            for (std::size_t a = 0; a < r.D; ++a)
                if (!vec_is_zero(psi.m.col_vec(a)))
                    return std::string("residual is nonzero on basis element ") +
                           r.atom_label(a);
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

namespace detail {

inline void push_component(Decomposition& dec, AdditiveEndo& psi, FamilyParams params,
                           const char* stage) {
    const RRing& r = *psi.ring;
    try {
        AdditiveEndo endo = build_family(params, r);
        psi.sub_inplace(endo);
        dec.components.emplace_back(std::move(params), std::move(endo));
    } catch (const Error& err) {
        if (err.code() == Errc::InvalidParams)
            fail(Errc::InternalExtractionError,
                 std::string("stage ") + stage + ": extracted parameters fail validation (" +
                     err.what() + ")");
        throw;
    }
}

inline void log_stage(Decomposition& dec, Stage stage, const AdditiveEndo& psi) {
    auto v = assert_stage_pattern(stage, psi);
    dec.stage_log.push_back(StageCheck{stage, !v.has_value(), v.value_or("")});
}

} // namespace detail

/// Run the constructive decomposition: peel off the diagonal, inner, central,
/// ring, special and almost-annihilator components in pipeline order and
/// return them with the final residual. Requires a Lie derivation and the
/// theorem hypotheses (n >= 4, or n = 3 with commutative K).
inline Decomposition decompose(const AdditiveEndo& delta) {
    const RRing& r = *delta.ring;
    const std::size_t n = r.n;

    LieCheckResult lie = is_lie_derivation(delta);
    if (!lie.ok)
        fail(Errc::HypothesisViolation, "input is not a Lie derivation: " + lie.describe(r));
    if (n == 3 && !r.commutativeK)
        fail(Errc::HypothesisViolation, "n = 3 requires a commutative base ring");

    Decomposition dec;
    AdditiveEndo psi = delta;

    auto image_at_one = [&](std::size_t i, std::size_t j) {
        return detail::psi_image(psi, i, j, r.K.one);
    };

    // --- basic stage: diagonal derivation plus two inner derivations -----
    {
        FamilyParams diag;
        diag.kind = FamilyKind::Diagonal;
        diag.diagonal.assign(n, r.K.zero());
        FpVec prefix = r.K.zero();
        for (std::size_t i = 1; i < n; ++i) {
            vec_add_inplace(prefix, image_at_one(i, i - 1).at(i, i - 1), r.p);
            diag.diagonal[i] = prefix;
        }
        detail::push_component(dec, psi, std::move(diag), "basic/diagonal");
    }
    {
        FamilyParams inner_a;
        inner_a.kind = FamilyKind::Inner;
        inner_a.inner_entries.assign(n * n, r.K.zero());
        for (std::size_t i = 2; i < n; ++i) {
            FpVec v = image_at_one(i, i - 1).at(i, 0);
            inner_a.inner_entries[(i - 1) * n + 0] = vec_scale(v, r.p - 1, r.p);
        }
        detail::push_component(dec, psi, std::move(inner_a), "basic/inner_a");
    }
    {
        FamilyParams inner_b;
        inner_b.kind = FamilyKind::Inner;
        inner_b.inner_entries.assign(n * n, r.K.zero());
        for (std::size_t i = 1; i < n; ++i) {
            RMatrix img = image_at_one(i, i - 1);
            for (std::size_t v0 = 0; v0 < n; ++v0) {
                if (v0 == i - 1 || v0 == i) continue;
                inner_b.inner_entries[v0 * n + i] = img.at(v0, i - 1);
            }
        }
        detail::push_component(dec, psi, std::move(inner_b), "basic/inner_b");
    }
    detail::log_stage(dec, Stage::Basic, psi);

    // --- central stage ----------------------------------------------------
    {
        FamilyParams central;
        central.kind = FamilyKind::CentralLie;
        central.maps.resize(2 * n + 2);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t k0 = (i == 1) ? 2 : 0;  // smallest diagonal index off {i-1, i}
            central.maps[i - 1] = component_map(psi, i, i - 1, n - 1, 0);
            central.maps[n + i - 1] = component_map(psi, i, i - 1, k0, k0);
        }
        central.maps[n - 1] = component_map(psi, 0, n - 1, n - 1, 0);
        central.maps[2 * n - 1] = component_map(psi, 0, n - 1, 1, 1);
        central.maps[2 * n] = component_map(psi, 1, 1, n - 1, 0);
        central.maps[2 * n + 1] = component_map(psi, 1, 1, 0, 0);
        detail::push_component(dec, psi, std::move(central), "central");
    }
    detail::log_stage(dec, Stage::Central, psi);

    // --- ring stage --------------------------------------------------------
    {
        FamilyParams ring_params;
        ring_params.kind = FamilyKind::Ring;
        ring_params.maps.push_back(component_map(psi, 1, 0, 1, 0));
        detail::push_component(dec, psi, std::move(ring_params), "ring");
    }
    detail::log_stage(dec, Stage::Ring, psi);

    // --- special type I -----------------------------------------------------
    {
        FamilyParams sp1;
        sp1.kind = FamilyKind::SpecialI;
        sp1.maps.push_back(component_map(psi, 1, 0, n - 1, 1));
        sp1.maps.push_back(component_map(psi, n - 1, n - 2, n - 2, 0));
        detail::push_component(dec, psi, std::move(sp1), "special_i");
    }
    detail::log_stage(dec, Stage::SpecialI, psi);

    // --- special type III (n = 3 only) --------------------------------------
    if (n == 3) {
        FamilyParams sp3;
        sp3.kind = FamilyKind::SpecialIII;
        sp3.maps.push_back(component_map(psi, 0, 2, 1, 0));
        sp3.maps.push_back(component_map(psi, 0, 2, 2, 1));
        detail::push_component(dec, psi, std::move(sp3), "special_iii");
        detail::log_stage(dec, Stage::SpecialIII, psi);
    }

    // --- inner derivation from the superdiagonal matrix C -------------------
    {
        FamilyParams inner_c;
        inner_c.kind = FamilyKind::Inner;
        inner_c.inner_entries.assign(n * n, r.K.zero());
        for (std::size_t k = 1; k < n; ++k)
            inner_c.inner_entries[(k - 1) * n + k] = image_at_one(k, k - 1).at(k - 1, k - 1);
        detail::push_component(dec, psi, std::move(inner_c), "inner_c");
    }
    detail::log_stage(dec, Stage::InnerC, psi);

    // --- almost annihilator --------------------------------------------------
    {
        FamilyParams ann;
        ann.kind = FamilyKind::AlmostAnnihilator;
        ann.maps.push_back(component_map(psi, 0, n - 1, 0, 0));
        ann.maps.push_back(component_map(psi, 0, n - 1, n - 1, n - 1));
        detail::push_component(dec, psi, std::move(ann), "almost_annihilator");
    }
    detail::log_stage(dec, Stage::AlmostAnnihilator, psi);

    // --- special type II (n >= 4) --------------------------------------------
    if (n >= 4) {
        FamilyParams sp2;
        sp2.kind = FamilyKind::SpecialII;
        sp2.maps.push_back(component_map(psi, 0, n - 1, n - 2, 0));
        sp2.maps.push_back(component_map(psi, 0, n - 1, n - 2, 1));
        sp2.maps.push_back(component_map(psi, 0, n - 1, n - 1, 1));
        detail::push_component(dec, psi, std::move(sp2), "special_ii");
        detail::log_stage(dec, Stage::SpecialII, psi);
    }

    dec.residual = psi;
    detail::log_stage(dec, Stage::Final, psi);
    return dec;
}

} // namespace ntlie
