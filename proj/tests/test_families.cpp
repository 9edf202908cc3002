#include <catch2/catch_amalgamated.hpp>

#include "ntlie/families.hpp"

using namespace ntlie;

namespace {

RRing ring_n3_f3() {
    FpAlgebra k = make_algebra({AlgebraKind::PrimeField, 3});
    return make_matrix_ring(k, ideal_closure(k, {}), 3);
}

RRing ring_n3_dual() {
    FpAlgebra k = make_algebra({AlgebraKind::DualNumbers, 3});
    return make_matrix_ring(k, ideal_closure(k, {k.unit(1)}), 3);
}

RRing ring_n4_dual() {
    FpAlgebra k = make_algebra({AlgebraKind::DualNumbers, 3});
    return make_matrix_ring(k, ideal_closure(k, {k.unit(1)}), 4);
}

RRing ring_n4_t2() {
    FpAlgebra k = make_algebra({AlgebraKind::UpperTriangular2, 3});
    return make_matrix_ring(k, ideal_closure(k, {k.unit(1)}), 4);
}

FamilyParams diag_params(const RRing& r, std::size_t i) {
    FamilyParams p;
    p.kind = FamilyKind::Diagonal;
    p.diagonal.assign(r.n, r.K.zero());
    p.diagonal[i] = r.K.one;
    return p;
}

bool is_derivation_kind(FamilyKind k) {
    return k == FamilyKind::Inner || k == FamilyKind::Diagonal || k == FamilyKind::Ring ||
           k == FamilyKind::AlmostAnnihilator;
}

} // namespace

TEST_CASE("the Lie predicate and its witness", "[families]") {
    RRing r = ring_n3_f3();
    CHECK(is_lie_derivation(AdditiveEndo::zero(r)).ok);

    AdditiveEndo sigma = build_family(diag_params(r, 1), r);
    CHECK(is_lie_derivation(sigma).ok);

    // e21 -> e21, everything else -> 0: fails on the pair (e21, e32)
    AdditiveEndo bad = AdditiveEndo::zero(r);
    bad.m.at(0, 0) = 1;
    LieCheckResult chk = is_lie_derivation(bad);
    REQUIRE_FALSE(chk.ok);
    CHECK(chk.a == 0);
    CHECK(chk.b == 2);
    CHECK(chk.defect == FpVec{0, 1, 0});  // defect is e31
}

TEST_CASE("the identity endomorphism is never a Lie derivation here", "[families]") {
    for (const RRing& r : {ring_n3_f3(), ring_n4_t2()})
        CHECK_FALSE(is_lie_derivation(AdditiveEndo::identity(r)).ok);
}

TEST_CASE("inner and diagonal family builders on R_3(F_3,0)", "[families]") {
    RRing r = ring_n3_f3();
    // basis order: e21, e31, e32
    FamilyParams inner;
    inner.kind = FamilyKind::Inner;
    inner.inner_entries.assign(9, r.K.zero());
    inner.inner_entries[1 * 3 + 0] = r.K.one;  // A = e21
    AdditiveEndo e = build_family(inner, r);
    CHECK(vec_is_zero(e.m.col_vec(0)));                   // e21 -> 0
    CHECK(vec_is_zero(e.m.col_vec(1)));                   // e31 -> 0
    CHECK(e.m.col_vec(2) == FpVec{0, 2, 0});              // e32 -> -e31

    AdditiveEndo sigma = build_family(diag_params(r, 1), r);  // d = e22
    CHECK(sigma.m.col_vec(0) == FpVec{1, 0, 0});   // e21 -> e21
    CHECK(sigma.m.col_vec(1) == FpVec{0, 0, 0});   // e31 -> 0
    CHECK(sigma.m.col_vec(2) == FpVec{0, 0, 2});   // e32 -> -e32

    FamilyParams central;
    central.kind = FamilyKind::CentralLie;
    for (const MapRole& role : family_map_roles(FamilyKind::CentralLie, r.n))
        central.maps.push_back(zero_map(r, role.domain));
    CHECK(build_family(central, r).is_zero());
}

TEST_CASE("parameter validation", "[families]") {
    RRing r4 = ring_n4_dual();

    FamilyParams sp1;
    sp1.kind = FamilyKind::SpecialI;
    sp1.maps.push_back(zero_map(r4, MapDomain::K));
    sp1.maps.push_back(zero_map(r4, MapDomain::K));
    sp1.maps[0].mat.at(1, 0) = 1;  // gamma: a+bt -> a*t
    CHECK(validate_family_params(sp1, r4).empty());
    CHECK(is_lie_derivation(build_family(sp1, r4)).ok);

    FamilyParams ring_params;
    ring_params.kind = FamilyKind::Ring;
    ring_params.maps.push_back(zero_map(r4, MapDomain::K));
    ring_params.maps[0].mat.at(0, 1) = 1;  // theta(t) = 1
    auto viol = validate_family_params(ring_params, r4);
    REQUIRE_FALSE(viol.empty());
    bool found = false;
    for (const Violation& v : viol) found |= v.condition == "theta(J) subset J";
    CHECK(found);
    CHECK_THROWS_AS(build_family(ring_params, r4), Error);

    RRing r3 = ring_n3_f3();
    FamilyParams inner;
    inner.kind = FamilyKind::Inner;
    inner.inner_entries.assign(9, r3.K.zero());
    inner.inner_entries[0 * 3 + 2] = r3.K.one;  // A = e13, needs J = 0
    auto iv = validate_family_params(inner, r3);
    REQUIRE(iv.size() == 1);
    CHECK(iv[0].condition == "A in R");
    CHECK(iv[0].witness.find("(1,3)") != std::string::npos);
}

TEST_CASE("family parameter spaces", "[families]") {
    RRing r3 = ring_n3_f3();
    CHECK(family_parameter_space(FamilyKind::CentralLie, r3).size() == 2);
    CHECK(family_parameter_space(FamilyKind::Inner, r3).size() == r3.D);
    CHECK(family_parameter_space(FamilyKind::Ring, r3).empty());
    CHECK_THROWS_AS(family_parameter_space(FamilyKind::SpecialII, r3), Error);

    RRing r4 = ring_n4_dual();
    CHECK_THROWS_AS(family_parameter_space(FamilyKind::SpecialIII, r4), Error);
    CHECK(family_parameter_space(FamilyKind::Ring, r4).size() == 1);
    CHECK(family_parameter_space(FamilyKind::AlmostAnnihilator, r4).size() == 2);
}

TEST_CASE("every admissible family member is a Lie derivation", "[families]") {
    for (const RRing& r : {ring_n3_f3(), ring_n3_dual(), ring_n4_t2()}) {
        for (FamilyKind kind : kAllFamilyKinds) {
            if (!family_admissible(kind, r.n)) continue;
            std::vector<FamilyParams> space = family_parameter_space(kind, r);
            SplitMix64 rng(99);
            for (const FamilyParams& p : space) {
                CHECK(validate_family_params(p, r).empty());
                AdditiveEndo e = build_family(p, r);
                CHECK(is_lie_derivation(e).ok);
                if (is_derivation_kind(kind)) CHECK(satisfies_derivation_rule(e).ok);
            }
            if (space.empty()) continue;
            for (int iter = 0; iter < 10; ++iter) {
                FpVec coeffs(space.size());
                for (u32& c : coeffs) c = rng.below(r.p);
                AdditiveEndo e = build_family(params_linear_combination(space, coeffs, r), r);
                CHECK(is_lie_derivation(e).ok);
                if (is_derivation_kind(kind)) CHECK(satisfies_derivation_rule(e).ok);
            }
        }
    }
}

TEST_CASE("build_family is linear in its parameters", "[families]") {
    RRing r = ring_n4_dual();
    SplitMix64 rng(31);
    for (FamilyKind kind : kAllFamilyKinds) {
        if (!family_admissible(kind, r.n)) continue;
        std::vector<FamilyParams> space = family_parameter_space(kind, r);
        if (space.empty()) continue;
        FpVec c1(space.size()), c2(space.size()), sum(space.size());
        for (std::size_t i = 0; i < space.size(); ++i) {
            c1[i] = rng.below(r.p);
            c2[i] = rng.below(r.p);
            sum[i] = fp_add(c1[i], c2[i], r.p);
        }
        AdditiveEndo lhs = build_family(params_linear_combination(space, sum, r), r);
        AdditiveEndo rhs = build_family(params_linear_combination(space, c1, r), r);
        rhs.add_inplace(build_family(params_linear_combination(space, c2, r), r));
        CHECK(lhs.m == rhs.m);
    }
}

TEST_CASE("passing endomorphisms are closed under F_p combinations", "[families]") {
    RRing r = ring_n3_dual();
    AdditiveEndo a = build_family(diag_params(r, 0), r);
    std::vector<FamilyParams> inner = family_parameter_space(FamilyKind::Inner, r);
    AdditiveEndo b = build_family(inner[4], r);
    SplitMix64 rng(12);
    for (int iter = 0; iter < 5; ++iter) {
        AdditiveEndo combo = AdditiveEndo::zero(r);
        vec_axpy(combo.m.a, rng.below(r.p), a.m.a, r.p);
        vec_axpy(combo.m.a, rng.below(r.p), b.m.a, r.p);
        CHECK(is_lie_derivation(combo).ok);
    }
}

TEST_CASE("shape constraints hold for family members", "[families]") {
    RRing r = ring_n3_f3();
    CHECK(lemma1_shape_check(AdditiveEndo::zero(r)).ok);
    CHECK(lemma1_shape_check(build_family(diag_params(r, 1), r)).ok);

    RRing r4 = ring_n4_t2();
    for (FamilyKind kind : {FamilyKind::Inner, FamilyKind::CentralLie, FamilyKind::SpecialII})
        for (const FamilyParams& p : family_parameter_space(kind, r4))
            CHECK(lemma1_shape_check(build_family(p, r4)).ok);
}
