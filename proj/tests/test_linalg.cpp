#include <catch2/catch_amalgamated.hpp>

#include "ntlie/linalg.hpp"

using namespace ntlie;

namespace {

FpMatrix mat(u32 p, std::size_t r, std::size_t c, std::initializer_list<u32> vals) {
    FpMatrix m(p, r, c);
    std::size_t i = 0;
    for (u32 v : vals) m.a[i++] = v % p;
    return m;
}

FpMatrix random_matrix(SplitMix64& rng, u32 p, std::size_t r, std::size_t c) {
    FpMatrix m(p, r, c);
    for (u32& v : m.a) v = rng.below(p);
    return m;
}

} // namespace

TEST_CASE("rref on identity, zero and rank-deficient matrices", "[linalg]") {
    auto id = rref_rank(FpMatrix::identity(3, 3));
    CHECK(id.rank == 3);

    auto zero = rref_rank(FpMatrix(3, 2, 2));
    CHECK(zero.rank == 0);

    auto dep = rref_rank(mat(3, 2, 2, {1, 2, 2, 4}));
    CHECK(dep.rank == 1);
    REQUIRE(dep.pivots.size() == 1);
    CHECK(dep.pivots[0] == 0);
}

TEST_CASE("kernel bases", "[linalg]") {
    FpMatrix k1 = kernel(mat(3, 2, 2, {1, 2, 2, 4}));
    REQUIRE(k1.rows == 1);
    CHECK(k1.row_vec(0) == FpVec{1, 1});

    CHECK(kernel(FpMatrix::identity(3, 4)).rows == 0);
    CHECK(kernel(FpMatrix(3, 2, 3)).rows == 3);
}

TEST_CASE("solve", "[linalg]") {
    auto x = solve(mat(3, 1, 1, {2}), {1});
    REQUIRE(x.has_value());
    CHECK(*x == FpVec{2});

    CHECK_FALSE(solve(FpMatrix(3, 2, 2), {1, 0}).has_value());

    FpVec b{2, 0, 1};
    auto y = solve(FpMatrix::identity(3, 3), b);
    REQUIRE(y.has_value());
    CHECK(*y == b);

    CHECK_THROWS_AS(solve(FpMatrix(3, 2, 2), {1, 0, 0}), Error);
}

TEST_CASE("subspace equality is canonical", "[linalg]") {
    Subspace a = Subspace::span(3, 2, {{1, 0}});
    Subspace b = Subspace::span(3, 2, {{2, 0}});
    Subspace c = Subspace::span(3, 2, {{0, 1}});
    CHECK(subspace_equal(a, b));
    CHECK_FALSE(subspace_equal(a, c));

    Subspace d1 = Subspace::span(5, 3, {{1, 2, 0}, {0, 1, 1}});
    Subspace d2 = Subspace::span(5, 3, {{0, 1, 1}, {1, 2, 0}});
    CHECK(subspace_equal(d1, d2));

    CHECK_THROWS_AS(subspace_equal(a, Subspace::span(3, 3, {})), Error);
}

TEST_CASE("kernel and solve properties on random matrices", "[linalg]") {
    SplitMix64 rng(42);
    for (int iter = 0; iter < 60; ++iter) {
        u32 p = iter % 2 == 0 ? 3 : 5;
        std::size_t r = 1 + rng.below(6), c = 1 + rng.below(6);
        FpMatrix m = random_matrix(rng, p, r, c);

        auto rr = rref_rank(m);
        FpMatrix k = kernel(m);
        CHECK(rr.rank + k.rows == c);
        for (std::size_t i = 0; i < k.rows; ++i)
            CHECK(vec_is_zero(m.matvec(k.row_vec(i))));

        FpVec target(r);
        for (u32& v : target) v = rng.below(p);
        if (auto x = solve(m, target)) CHECK(m.matvec(*x) == target);
    }
}

TEST_CASE("streaming accumulator matches monolithic rref", "[linalg]") {
    SplitMix64 rng(7);
    for (int iter = 0; iter < 40; ++iter) {
        u32 p = 3;
        std::size_t r = 1 + rng.below(8), c = 1 + rng.below(8);
        FpMatrix m = random_matrix(rng, p, r, c);

        RrefAccumulator acc(p, c);
        acc.add_rows(m);

        RrefResult mono = rref_rank(m);
        REQUIRE(acc.rank() == mono.rank);
        for (std::size_t i = 0; i < mono.rank; ++i)
            CHECK(acc.rows()[i] == mono.reduced.row_vec(i));
    }
}

TEST_CASE("kernel size matches exhaustive enumeration over F_3", "[linalg]") {
    SplitMix64 rng(11);
    for (int iter = 0; iter < 8; ++iter) {
        std::size_t c = 4 + rng.below(5);  // brute force stays within 3^9 candidates
        std::size_t r = 1 + rng.below(4);
        FpMatrix m = random_matrix(rng, 3, r, c);

        std::size_t count = 0;
        std::size_t total = 1;
        for (std::size_t i = 0; i < c; ++i) total *= 3;
        FpVec v(c, 0);
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t x = code;
            for (std::size_t i = 0; i < c; ++i) {
                v[i] = static_cast<u32>(x % 3);
                x /= 3;
            }
            if (vec_is_zero(m.matvec(v))) ++count;
        }
        std::size_t expect = 1;
        for (std::size_t i = 0; i < kernel(m).rows; ++i) expect *= 3;
        CHECK(count == expect);
    }
}

TEST_CASE("subspace sum and intersection dimensions", "[linalg]") {
    SplitMix64 rng(23);
    for (int iter = 0; iter < 30; ++iter) {
        u32 p = 3;
        std::size_t dim = 4 + rng.below(3);
        std::vector<FpVec> g1, g2;
        for (int i = 0; i < 3; ++i) {
            FpVec v(dim), w(dim);
            for (u32& x : v) x = rng.below(p);
            for (u32& x : w) x = rng.below(p);
            g1.push_back(v);
            g2.push_back(w);
        }
        Subspace u = Subspace::span(p, dim, g1);
        Subspace w = Subspace::span(p, dim, g2);
        Subspace sum = subspace_sum(u, w);
        Subspace meet = subspace_intersect(u, w);
        CHECK(sum.dim() + meet.dim() == u.dim() + w.dim());
        for (const FpVec& v : meet.basis) {
            CHECK(u.member(v));
            CHECK(w.member(v));
        }
        // residual map agrees with reduce
        for (const FpVec& v : g2) CHECK(u.residual_map().matvec(v) == u.reduce(v));
    }
}
