#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "ntlie/decompose.hpp"

namespace ntlie {

/// Outcome of a Main-Theorem verification run on one instance.
struct TheoremReport {
    std::string instance;
    u32 p = 0;
    std::size_t n = 0;
    std::size_t D = 0;
    std::size_t lie_module_rank = 0;
    std::size_t families_span_rank = 0;
    bool span_equal = false;
    std::size_t decomposed_count = 0;
    std::size_t max_residual_rank = 0;
    std::vector<std::pair<FamilyKind, std::size_t>> family_ranks;
    u64 seed = 0;
    std::size_t samples = 0;
    double timing_ms = 0.0;  // diagnostics only; never part of serialized reports
};

inline constexpr std::size_t kDefaultDimCap = 64;

namespace detail {

inline void check_capacity(const RRing& r, std::size_t cap) {
    if (r.D > cap)
        fail(Errc::CapacityExceeded, "D = " + std::to_string(r.D) +
                                         " exceeds the configured cap " + std::to_string(cap));
}

/// One block of Lie-rule constraint rows for the basis pair (a,b):
/// D scalar equations over the D^2 unknowns M(r,c) (flattened r*D + c).
inline void lie_pair_rows(const RRing& r, std::size_t a, std::size_t b,
                          std::vector<FpVec>& out) {
    const std::size_t D = r.D;
    const FpVec& brkab = r.brk_table[a][b];
    out.assign(D, FpVec(D * D, 0));
    for (std::size_t k = 0; k < D; ++k) {
        FpVec& row = out[k];
        for (std::size_t c = 0; c < D; ++c)
            if (brkab[c] != 0) row[k * D + c] = brkab[c];
        for (std::size_t m = 0; m < D; ++m) {
            u32 v1 = r.brk_table[m][b][k];
            if (v1 != 0) {
                std::size_t idx = m * D + a;
                row[idx] = fp_sub(row[idx], v1, r.p);
            }
            u32 v2 = r.brk_table[a][m][k];
            if (v2 != 0) {
                std::size_t idx = m * D + b;
                row[idx] = fp_sub(row[idx], v2, r.p);
            }
        }
    }
}

} // namespace detail

/// Canonical row space of the Lie-derivation constraint system. Unordered
/// pair assembly suffices (both sides of the rule are antisymmetric in the
/// pair); `ordered` assembles every ordered pair instead, for the
/// equivalence test.
inline Subspace lie_constraint_rowspace(const RRing& r, bool ordered = false) {
    RrefAccumulator acc(r.p, r.D * r.D);
    std::vector<FpVec> block;
    for (std::size_t a = 0; a < r.D; ++a)
        for (std::size_t b = ordered ? 0 : a + 1; b < r.D; ++b) {
            if (ordered && a == b) continue;
            detail::lie_pair_rows(r, a, b, block);
            for (FpVec& row : block) acc.add_row(std::move(row));
        }
    return Subspace{r.p, r.D * r.D, acc.rows(), acc.pivots()};
}

/// Full F_p-module of Lie derivations of R as the kernel of the exact
/// constraint system; returns an echelonized basis of endomorphisms.
inline std::vector<AdditiveEndo> lie_derivation_module(const RRing& r,
                                                       std::size_t cap = kDefaultDimCap) {
    detail::check_capacity(r, cap);
    Subspace rowspace = lie_constraint_rowspace(r);
    FpMatrix constraints = FpMatrix::from_rows(r.p, r.D * r.D, rowspace.basis);
    FpMatrix kmat = kernel(constraints);
    std::vector<AdditiveEndo> basis;
    for (std::size_t i = 0; i < kmat.rows; ++i) {
        AdditiveEndo e = endo_from_flat(r, kmat.row_vec(i));
        LieCheckResult chk = is_lie_derivation(e);
        if (!chk.ok)
            fail(Errc::FormulaMismatch,
                 "solver kernel element fails the Lie predicate: " + chk.describe(r));
        basis.push_back(std::move(e));
    }
    return basis;
}

/// Parameter-space ranks of every family admissible at this size.
inline std::vector<std::pair<FamilyKind, std::size_t>> family_space_ranks(const RRing& r) {
    std::vector<std::pair<FamilyKind, std::size_t>> out;
    for (FamilyKind k : kAllFamilyKinds)
        if (family_admissible(k, r.n))
            out.emplace_back(k, family_parameter_space(k, r).size());
    return out;
}

/// Span of all family endomorphisms inside End(R) (a subspace of F_p^{D^2}).
inline Subspace families_span(const RRing& r, std::size_t cap = kDefaultDimCap) {
    detail::check_capacity(r, cap);
    RrefAccumulator acc(r.p, r.D * r.D);
    for (FamilyKind k : kAllFamilyKinds) {
        if (!family_admissible(k, r.n)) continue;
        for (const FamilyParams& params : family_parameter_space(k, r))
            acc.add_row(endo_to_flat(build_family(params, r)));
    }
    return Subspace{r.p, r.D * r.D, acc.rows(), acc.pivots()};
}

/// Seeded uniform F_p-combination of the kernel basis.
inline AdditiveEndo random_kernel_element(const RRing& r,
                                          const std::vector<AdditiveEndo>& basis,
                                          SplitMix64& rng) {
    AdditiveEndo e = AdditiveEndo::zero(r);
    for (const AdditiveEndo& b : basis) {
        u32 c = rng.below(r.p);
        if (c != 0) vec_axpy(e.m.a, c, b.m.a, r.p);
    }
    return e;
}

namespace detail {

inline std::string render_endo_inline(const AdditiveEndo& e) {
    std::string s;
    for (std::size_t r = 0; r < e.m.rows; ++r) {
        for (std::size_t c = 0; c < e.m.cols; ++c) {
            s += std::to_string(e.m.at(r, c));
            s += c + 1 == e.m.cols ? "" : " ";
        }
        s += "; ";
    }
    return s;
}

} // namespace detail

/// Verify the Main Theorem on one instance: the span of all families equals
/// the solved Lie-derivation module, and every kernel basis element plus
/// `samples` seeded combinations decomposes with zero residual. Throws
/// TheoremFailure with the witness endomorphism otherwise.
inline TheoremReport main_theorem_check(const RRing& r, std::size_t samples, u64 seed,
                                        std::size_t cap = kDefaultDimCap,
                                        const std::string& instance_name = "") {
    auto t0 = std::chrono::steady_clock::now();
    if (r.n == 3 && !r.commutativeK)
        fail(Errc::HypothesisViolation, "n = 3 requires a commutative base ring");

    std::vector<AdditiveEndo> kernel_basis = lie_derivation_module(r, cap);
    Subspace span = families_span(r, cap);
    std::vector<FpVec> flats;
    for (const AdditiveEndo& e : kernel_basis) flats.push_back(endo_to_flat(e));
    Subspace kernel_space = Subspace::span(r.p, r.D * r.D, flats);

    bool equal = subspace_equal(span, kernel_space);
    if (!equal) {
        for (const AdditiveEndo& e : kernel_basis)
            if (!span.member(endo_to_flat(e)))
                fail(Errc::TheoremFailure,
                     "Lie derivation outside the family span; witness matrix: " +
                         detail::render_endo_inline(e));
        fail(Errc::TheoremFailure, "family span is not contained in the Lie module");
    }

    std::size_t max_residual_rank = 0;
    std::size_t decomposed = 0;
    auto run_one = [&](const AdditiveEndo& e) {
        Decomposition dec = decompose(e);
        std::size_t rr = rref_rank(dec.residual.m).rank;
        if (rr > max_residual_rank) max_residual_rank = rr;
        if (rr != 0)
            fail(Errc::TheoremFailure, "nonzero residual (rank " + std::to_string(rr) +
                                           "); witness matrix: " +
                                           detail::render_endo_inline(e));
        if (!dec.all_stage_checks_ok()) {
            for (const StageCheck& c : dec.stage_log)
                if (!c.ok)
                    fail(Errc::TheoremFailure,
                         std::string("stage pattern violated (") + stage_name(c.stage) +
                             "): " + c.detail +
                             "; witness matrix: " + detail::render_endo_inline(e));
        }
        ++decomposed;
    };
    for (const AdditiveEndo& e : kernel_basis) run_one(e);
    SplitMix64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) run_one(random_kernel_element(r, kernel_basis, rng));

    TheoremReport rep;
    rep.instance = instance_name;
    rep.p = r.p;
    rep.n = r.n;
    rep.D = r.D;
    rep.lie_module_rank = kernel_basis.size();
    rep.families_span_rank = span.dim();
    rep.span_equal = equal;
    rep.decomposed_count = decomposed;
    rep.max_residual_rank = max_residual_rank;
    rep.family_ranks = family_space_ranks(r);
    rep.seed = seed;
    rep.samples = samples;
    rep.timing_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return rep;
}

} // namespace ntlie
