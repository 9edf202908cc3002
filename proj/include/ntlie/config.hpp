#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ntlie/matrix_ring.hpp"
#include "ntlie/solver.hpp"

namespace ntlie {

/// Instance description as read from a config file.
struct InstanceConfig {
    std::string name;
    std::size_t n = 3;
    AlgebraSpec algebra;
    std::vector<FpVec> ideal_gens;
    std::size_t max_dim = kDefaultDimCap;
    u64 seed = 7;
    std::size_t samples = 100;
};

namespace detail {

inline AlgebraKind parse_algebra_kind(const std::string& s) {
    if (s == "prime_field") return AlgebraKind::PrimeField;
    if (s == "dual_numbers") return AlgebraKind::DualNumbers;
    if (s == "upper_triangular_2") return AlgebraKind::UpperTriangular2;
    if (s == "table") return AlgebraKind::Table;
    fail(Errc::ConfigError, "unknown algebra kind '" + s + "'");
}

inline FpVec parse_vec(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array()) fail(Errc::ConfigError, field + ": expected an array of integers");
    FpVec v;
    for (const auto& x : j) {
        if (!x.is_number_integer() || x.get<std::int64_t>() < 0)
            fail(Errc::ConfigError, field + ": entries must be non-negative integers");
        v.push_back(static_cast<u32>(x.get<std::int64_t>()));
    }
    return v;
}

} // namespace detail

inline InstanceConfig parse_instance_config(const nlohmann::json& j) {
    InstanceConfig cfg;
    if (!j.is_object()) fail(Errc::ConfigError, "config root must be an object");
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    if (!j.contains("p") || !j.at("p").is_number_integer())
        fail(Errc::ConfigError, "field 'p' (odd prime) is required");
    cfg.algebra.p = static_cast<u32>(j.at("p").get<std::int64_t>());
    if (!j.contains("n") || !j.at("n").is_number_integer())
        fail(Errc::ConfigError, "field 'n' (matrix size) is required");
    cfg.n = static_cast<std::size_t>(j.at("n").get<std::int64_t>());

    if (j.contains("algebra")) {
        const auto& alg = j.at("algebra");
        if (!alg.is_object() || !alg.contains("kind"))
            fail(Errc::ConfigError, "field 'algebra' must be an object with a 'kind'");
        cfg.algebra.kind = detail::parse_algebra_kind(alg.at("kind").get<std::string>());
        if (cfg.algebra.kind == AlgebraKind::Table) {
            if (!alg.contains("one") || !alg.contains("table"))
                fail(Errc::ConfigError, "table algebra needs 'one' and 'table'");
            cfg.algebra.one = detail::parse_vec(alg.at("one"), "algebra.one");
            cfg.algebra.dim = cfg.algebra.one.size();
            if (alg.contains("labels"))
                for (const auto& l : alg.at("labels"))
                    cfg.algebra.labels.push_back(l.get<std::string>());
            const auto& tab = alg.at("table");
            if (!tab.is_array() || tab.size() != cfg.algebra.dim)
                fail(Errc::ConfigError, "algebra.table must be a dim x dim grid of vectors");
            for (const auto& row : tab) {
                if (!row.is_array() || row.size() != cfg.algebra.dim)
                    fail(Errc::ConfigError, "algebra.table must be a dim x dim grid of vectors");
                std::vector<FpVec> r;
                for (const auto& cell : row) r.push_back(detail::parse_vec(cell, "algebra.table"));
                cfg.algebra.table.push_back(std::move(r));
            }
        }
    }
    if (j.contains("ideal")) {
        const auto& ideal = j.at("ideal");
        if (!ideal.is_array()) fail(Errc::ConfigError, "field 'ideal' must be an array");
        for (const auto& g : ideal) cfg.ideal_gens.push_back(detail::parse_vec(g, "ideal"));
    }
    if (j.contains("caps") && j.at("caps").contains("max_dim"))
        cfg.max_dim = static_cast<std::size_t>(j.at("caps").at("max_dim").get<std::int64_t>());
    if (j.contains("seed")) cfg.seed = j.at("seed").get<u64>();
    if (j.contains("samples"))
        cfg.samples = static_cast<std::size_t>(j.at("samples").get<std::int64_t>());
    return cfg;
}

inline InstanceConfig load_instance_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::ConfigError, "cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ConfigError, "parse error in '" + path + "': " + e.what());
    }
    InstanceConfig cfg = parse_instance_config(j);
    if (cfg.name.empty()) cfg.name = path;
    return cfg;
}

/// A config realized as a validated ring. Construction enforces the odd
/// prime hypothesis, ideal closure and the dimension cap.
struct Instance {
    InstanceConfig cfg;
    RRing ring;
};

inline Instance build_instance(const InstanceConfig& cfg) {
    FpAlgebra k = make_algebra(cfg.algebra);
    for (const FpVec& g : cfg.ideal_gens)
        if (g.size() != k.dim)
            fail(Errc::ConfigError, "ideal generator length " + std::to_string(g.size()) +
                                        " does not match algebra dimension " +
                                        std::to_string(k.dim));
    std::vector<FpVec> gens = cfg.ideal_gens;
    for (FpVec& g : gens)
        for (u32& x : g) x %= k.p;
    IdealSubspace j = ideal_closure(k, gens);
    if (cfg.n < 3) fail(Errc::SizeTooSmall, "matrix size must be at least 3");
    if (ring_dimension(k, j, cfg.n) > cfg.max_dim)
        fail(Errc::CapacityExceeded,
             "D = " + std::to_string(ring_dimension(k, j, cfg.n)) + " exceeds max_dim " +
                 std::to_string(cfg.max_dim));
    return Instance{cfg, make_matrix_ring(k, j, cfg.n)};
}

/// The built-in verification matrix: J = 0, J != 0 commutative, and
/// noncommutative base rings, on both theorem branches.
inline std::vector<InstanceConfig> default_instances() {
    std::vector<InstanceConfig> out;
    auto mk = [&](const char* name, u32 p, std::size_t n, AlgebraKind kind,
                  std::vector<FpVec> gens) {
        InstanceConfig c;
        c.name = name;
        c.n = n;
        c.algebra.kind = kind;
        c.algebra.p = p;
        c.ideal_gens = std::move(gens);
        out.push_back(std::move(c));
    };
    mk("n3_f3", 3, 3, AlgebraKind::PrimeField, {});
    mk("n3_dual", 3, 3, AlgebraKind::DualNumbers, {{0, 1}});
    mk("n4_dual", 3, 4, AlgebraKind::DualNumbers, {{0, 1}});
    mk("n4_t2", 3, 4, AlgebraKind::UpperTriangular2, {{0, 1, 0}});
    mk("n5_f5", 5, 5, AlgebraKind::PrimeField, {});
    return out;
}

} // namespace ntlie
