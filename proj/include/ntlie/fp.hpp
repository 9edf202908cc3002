#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ntlie/error.hpp"

namespace ntlie {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

/// Coordinate vector over F_p, entries kept reduced in [0, p).
using FpVec = std::vector<u32>;

inline bool is_prime(u64 m) {
    if (m < 2) return false;
    for (u64 d = 2; d * d <= m; ++d)
        if (m % d == 0) return false;
    return true;
}

inline u32 fp_add(u32 a, u32 b, u32 p) {
    u32 s = a + b;
    return s >= p ? s - p : s;
}

inline u32 fp_sub(u32 a, u32 b, u32 p) { return a >= b ? a - b : a + p - b; }

inline u32 fp_neg(u32 a, u32 p) { return a == 0 ? 0 : p - a; }

inline u32 fp_mul(u32 a, u32 b, u32 p) { return static_cast<u32>((u64(a) * b) % p); }

/// Inverse by extended Euclid; a must be nonzero mod p.
inline u32 fp_inv(u32 a, u32 p) {
    std::int64_t t = 0, newt = 1, r = p, newr = a % p;
    while (newr != 0) {
        std::int64_t q = r / newr;
        t = std::exchange(newt, t - q * newt);
        r = std::exchange(newr, r - q * newr);
    }
    if (r != 1) fail(Errc::DimensionMismatch, "fp_inv of non-unit");
    return static_cast<u32>(t < 0 ? t + p : t);
}

/// Reduce a possibly signed value into [0, p).
inline u32 fp_norm(std::int64_t v, u32 p) {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    return static_cast<u32>(r);
}

inline bool vec_is_zero(const FpVec& v) {
    for (u32 x : v)
        if (x != 0) return false;
    return true;
}

inline void vec_add_inplace(FpVec& a, const FpVec& b, u32 p) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = fp_add(a[i], b[i], p);
}

inline void vec_sub_inplace(FpVec& a, const FpVec& b, u32 p) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = fp_sub(a[i], b[i], p);
}

/// a += c * b
inline void vec_axpy(FpVec& a, u32 c, const FpVec& b, u32 p) {
    if (c == 0) return;
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = static_cast<u32>((a[i] + u64(c) * b[i]) % p);
}

inline FpVec vec_scale(const FpVec& a, u32 c, u32 p) {
    FpVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = fp_mul(a[i], c, p);
    return r;
}

/// Deterministic PRNG for seeded sampling (splitmix64).
struct SplitMix64 {
    u64 state;

    explicit SplitMix64(u64 seed) : state(seed) {}

    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    u32 below(u32 m) { return static_cast<u32>(next() % m); }
};

} // namespace ntlie
