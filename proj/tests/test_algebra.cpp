#include <catch2/catch_amalgamated.hpp>

#include "ntlie/algebra.hpp"

using namespace ntlie;

namespace {

FpAlgebra f3() { return make_algebra({AlgebraKind::PrimeField, 3}); }
FpAlgebra f5() { return make_algebra({AlgebraKind::PrimeField, 5}); }
FpAlgebra dual3() { return make_algebra({AlgebraKind::DualNumbers, 3}); }
FpAlgebra t2() { return make_algebra({AlgebraKind::UpperTriangular2, 3}); }

} // namespace

TEST_CASE("built-in algebras", "[algebra]") {
    FpAlgebra k = f3();
    CHECK(k.dim == 1);
    CHECK(k.one == FpVec{1});

    FpAlgebra d = dual3();
    CHECK(d.dim == 2);
    CHECK(d.mul(d.unit(1), d.unit(1)) == d.zero());  // t*t = 0
    CHECK(d.is_commutative());

    FpAlgebra u = t2();
    CHECK(u.one == FpVec{1, 0, 1});
    CHECK(u.mul(u.unit(1), u.unit(2)) == u.unit(1));  // E12*E22 = E12
    CHECK(u.mul(u.unit(2), u.unit(1)) == u.zero());   // E22*E12 = 0
    CHECK_FALSE(u.is_commutative());
}

TEST_CASE("modulus must be an odd prime", "[algebra]") {
    CHECK_THROWS_MATCHES(make_algebra({AlgebraKind::PrimeField, 2}), Error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("EvenCharacteristic")));
    CHECK_THROWS_AS(make_algebra({AlgebraKind::DualNumbers, 9}), Error);
    CHECK_THROWS_AS(make_algebra({AlgebraKind::PrimeField, 1}), Error);
    CHECK_NOTHROW(make_algebra({AlgebraKind::UpperTriangular2, 7}));
}

TEST_CASE("table algebras are verified on basis triples", "[algebra]") {
    // F_3[C_2] presented as a table is a perfectly good algebra
    AlgebraSpec group;
    group.kind = AlgebraKind::Table;
    group.p = 3;
    group.one = {1, 0};
    group.table = {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}};
    CHECK_NOTHROW(make_algebra(group));

    // upper-triangular table with E12*E22 corrupted to E11: the identity
    // check catches it (E12 * one = E11)
    AlgebraSpec bad;
    bad.kind = AlgebraKind::Table;
    bad.p = 3;
    bad.one = {1, 0, 1};
    bad.table = {
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}},
        {{0, 0, 0}, {0, 0, 0}, {1, 0, 0}},
        {{0, 0, 0}, {0, 0, 0}, {0, 0, 1}},
    };
    try {
        make_algebra(bad);
        FAIL("expected NotAssociative or NoIdentity");
    } catch (const Error& e) {
        CHECK((e.code() == Errc::NotAssociative || e.code() == Errc::NoIdentity));
    }

    AlgebraSpec noid;
    noid.kind = AlgebraKind::Table;
    noid.p = 3;
    noid.one = {0, 1};
    noid.table = {{{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}};  // dual numbers, wrong one
    CHECK_THROWS_AS(make_algebra(noid), Error);
}

TEST_CASE("ideal closure", "[algebra]") {
    FpAlgebra u = t2();
    IdealSubspace j = ideal_closure(u, {u.unit(1)});
    CHECK(j.dim() == 1);
    CHECK(j.space.member(u.unit(1)));

    FpAlgebra d = dual3();
    IdealSubspace jt = ideal_closure(d, {d.unit(1)});
    CHECK(jt.dim() == 1);
    CHECK(jt.square.dim() == 0);  // t^2 = 0

    IdealSubspace zero = ideal_closure(d, {});
    CHECK(zero.dim() == 0);

    // idempotence: closing a closed ideal changes nothing
    IdealSubspace again = ideal_closure(u, j.space.basis);
    CHECK(subspace_equal(again.space, j.space));
    CHECK(is_ideal(u, j.space));
}

TEST_CASE("annihilator", "[algebra]") {
    FpAlgebra d = dual3();
    IdealSubspace jt = ideal_closure(d, {d.unit(1)});
    Subspace ann = annihilator(d, jt);
    CHECK(ann.dim() == 1);
    CHECK(ann.member(d.unit(1)));

    FpAlgebra k = f3();
    CHECK(annihilator(k, ideal_closure(k, {})).dim() == 1);  // Ann(0) = K

    FpAlgebra u = t2();
    IdealSubspace je = ideal_closure(u, {u.unit(1)});
    Subspace annu = annihilator(u, je);
    CHECK(annu.dim() == 1);
    CHECK(annu.member(u.unit(1)));

    // annihilator elements kill J from both sides
    for (const FpVec& a : annu.basis)
        for (const FpVec& j : je.space.basis) {
            CHECK(u.mul(a, j) == u.zero());
            CHECK(u.mul(j, a) == u.zero());
        }
}

TEST_CASE("center", "[algebra]") {
    CHECK(center(dual3()).dim() == 2);
    CHECK(center(f5()).dim() == 1);

    FpAlgebra u = t2();
    Subspace c = center(u);
    CHECK(c.dim() == 1);
    CHECK(c.member(FpVec{1, 0, 1}));  // scalars E11+E22

    for (const FpVec& z : c.basis)
        for (std::size_t i = 0; i < u.dim; ++i)
            CHECK(u.mul(z, u.unit(i)) == u.mul(u.unit(i), z));
}
