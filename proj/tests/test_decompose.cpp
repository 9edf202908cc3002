#include <catch2/catch_amalgamated.hpp>

#include "ntlie/decompose.hpp"
#include "ntlie/solver.hpp"

using namespace ntlie;

namespace {

RRing ring_n3_f3() {
    FpAlgebra k = make_algebra({AlgebraKind::PrimeField, 3});
    return make_matrix_ring(k, ideal_closure(k, {}), 3);
}

RRing ring_n3_t2() {
    FpAlgebra k = make_algebra({AlgebraKind::UpperTriangular2, 3});
    return make_matrix_ring(k, ideal_closure(k, {k.unit(1)}), 3);
}

RRing ring_n4_dual() {
    FpAlgebra k = make_algebra({AlgebraKind::DualNumbers, 3});
    return make_matrix_ring(k, ideal_closure(k, {k.unit(1)}), 4);
}

} // namespace

TEST_CASE("decomposing the zero map", "[decompose]") {
    RRing r = ring_n3_f3();
    Decomposition dec = decompose(AdditiveEndo::zero(r));
    CHECK(dec.residual_zero());
    CHECK(dec.all_stage_checks_ok());
    for (const auto& [params, endo] : dec.components) CHECK(endo.is_zero());
    CHECK(dec.reconstruct().is_zero());
    // n = 3 pipeline: sigma_d, I_A, I_B, central, ring, special I, special III,
    // I_C, almost annihilator
    CHECK(dec.components.size() == 9);
}

TEST_CASE("decomposing a diagonal derivation recovers it exactly", "[decompose]") {
    RRing r = ring_n3_f3();
    FamilyParams diag;
    diag.kind = FamilyKind::Diagonal;
    diag.diagonal.assign(3, r.K.zero());
    diag.diagonal[1] = r.K.one;  // d = e22
    AdditiveEndo sigma = build_family(diag, r);

    Decomposition dec = decompose(sigma);
    CHECK(dec.residual_zero());
    CHECK(dec.all_stage_checks_ok());
    AdditiveEndo sum = dec.reconstruct();
    CHECK(sum.m == sigma.m);
}

TEST_CASE("a seeded mix of family members has zero residual", "[decompose]") {
    RRing r = ring_n4_dual();
    SplitMix64 rng(2024);
    AdditiveEndo mix = AdditiveEndo::zero(r);
    for (FamilyKind kind : kAllFamilyKinds) {
        if (!family_admissible(kind, r.n)) continue;
        for (const FamilyParams& p : family_parameter_space(kind, r))
            vec_axpy(mix.m.a, rng.below(r.p), build_family(p, r).m.a, r.p);
    }
    REQUIRE(is_lie_derivation(mix).ok);

    Decomposition dec = decompose(mix);
    CHECK(dec.residual_zero());
    CHECK(dec.all_stage_checks_ok());
    CHECK(dec.reconstruct().m == mix.m);
    for (const auto& [params, endo] : dec.components) {
        CHECK(validate_family_params(params, r).empty());
        CHECK(is_lie_derivation(endo).ok);
    }
}

TEST_CASE("reconstruction is exact on every kernel element", "[decompose]") {
    RRing r = ring_n3_f3();
    SplitMix64 rng(8);
    auto basis = lie_derivation_module(r);
    for (int iter = 0; iter < 20; ++iter) {
        AdditiveEndo e = random_kernel_element(r, basis, rng);
        Decomposition dec = decompose(e);
        CHECK(dec.reconstruct().m == e.m);
        CHECK(dec.residual_zero());
    }
}

TEST_CASE("decompose(build_family(p)) always has zero residual", "[decompose]") {
    RRing r = ring_n4_dual();
    for (FamilyKind kind : kAllFamilyKinds) {
        if (!family_admissible(kind, r.n)) continue;
        for (const FamilyParams& p : family_parameter_space(kind, r)) {
            Decomposition dec = decompose(build_family(p, r));
            CHECK(dec.residual_zero());
            CHECK(dec.all_stage_checks_ok());
        }
    }
}

TEST_CASE("hypothesis violations are rejected", "[decompose]") {
    RRing r = ring_n3_f3();
    AdditiveEndo bad = AdditiveEndo::zero(r);
    bad.m.at(0, 0) = 1;  // not a Lie derivation
    CHECK_THROWS_MATCHES(decompose(bad), Error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("HypothesisViolation")));

    RRing rt = ring_n3_t2();  // n = 3 with noncommutative K
    try {
        decompose(AdditiveEndo::zero(rt));
        FAIL("expected HypothesisViolation");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::HypothesisViolation);
    }
}

TEST_CASE("stage patterns on the zero residual", "[decompose]") {
    RRing r = ring_n3_f3();
    AdditiveEndo zero = AdditiveEndo::zero(r);
    for (Stage s : {Stage::Basic, Stage::Central, Stage::Ring, Stage::SpecialI,
                    Stage::SpecialIII, Stage::InnerC, Stage::AlmostAnnihilator,
                    Stage::Final})
        CHECK_FALSE(assert_stage_pattern(s, zero).has_value());

    AdditiveEndo nz = AdditiveEndo::zero(r);
    nz.m.at(0, 0) = 1;
    CHECK(assert_stage_pattern(Stage::Final, nz).has_value());
    CHECK(assert_stage_pattern(Stage::InnerC, nz).has_value());  // breaks (*)
}
