#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ntlie/config.hpp"

namespace ntlie {

namespace detail {

inline std::string vec_str(const FpVec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(v[i]);
    }
    return s;
}

inline nlohmann::json matrix_json(const FpMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

/// Plain-text endomorphism format: header line "p D", then D rows of D
/// integers; row r, column c is the r-th output coordinate of the image of
/// basis element c.
inline void write_endo(std::ostream& out, const AdditiveEndo& e) {
    out << e.m.p << " " << e.m.rows << "\n";
    for (std::size_t r = 0; r < e.m.rows; ++r) {
        for (std::size_t c = 0; c < e.m.cols; ++c) out << (c ? " " : "") << e.m.at(r, c);
        out << "\n";
    }
}

inline AdditiveEndo read_endo(std::istream& in, const RRing& r) {
    u64 p = 0, d = 0;
    if (!(in >> p >> d)) fail(Errc::ConfigError, "endo file: cannot read 'p D' header");
    if (p != r.p)
        fail(Errc::ConfigError, "endo file modulus " + std::to_string(p) +
                                    " does not match instance p = " + std::to_string(r.p));
    if (d != r.D)
        fail(Errc::ConfigError, "endo file dimension " + std::to_string(d) +
                                    " does not match instance D = " + std::to_string(r.D));
    AdditiveEndo e = AdditiveEndo::zero(r);
    for (std::size_t row = 0; row < r.D; ++row)
        for (std::size_t col = 0; col < r.D; ++col) {
            std::int64_t v;
            if (!(in >> v)) fail(Errc::ConfigError, "endo file: not enough entries");
            e.m.at(row, col) = fp_norm(v, r.p);
        }
    return e;
}

inline AdditiveEndo read_endo_file(const std::string& path, const RRing& r) {
    std::ifstream in(path);
    if (!in) fail(Errc::ConfigError, "cannot open endo file '" + path + "'");
    return read_endo(in, r);
}

inline std::string render_theorem_report(const TheoremReport& rep, bool machine) {
    if (machine) {
        nlohmann::json j;
        j["instance"] = rep.instance;
        j["p"] = rep.p;
        j["n"] = rep.n;
        j["D"] = rep.D;
        j["lie_module_rank"] = rep.lie_module_rank;
        j["families_span_rank"] = rep.families_span_rank;
        j["span_equal"] = rep.span_equal;
        j["decomposed_count"] = rep.decomposed_count;
        j["max_residual_rank"] = rep.max_residual_rank;
        nlohmann::json ranks;
        for (const auto& [kind, rank] : rep.family_ranks) ranks[family_name(kind)] = rank;
        j["family_ranks"] = ranks;
        j["seed"] = rep.seed;
        j["samples"] = rep.samples;
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "theorem report\n";
    out << "instance: " << rep.instance << "\n";
    out << "p: " << rep.p << "\n";
    out << "n: " << rep.n << "\n";
    out << "D: " << rep.D << "\n";
    out << "lie_module_rank: " << rep.lie_module_rank << "\n";
    out << "families_span_rank: " << rep.families_span_rank << "\n";
    out << "span_equal: " << (rep.span_equal ? "true" : "false") << "\n";
    out << "decomposed_count: " << rep.decomposed_count << "\n";
    out << "max_residual_rank: " << rep.max_residual_rank << "\n";
    for (const auto& [kind, rank] : rep.family_ranks)
        out << "family_rank." << family_name(kind) << ": " << rank << "\n";
    out << "seed: " << rep.seed << "\n";
    out << "samples: " << rep.samples << "\n";
    return out.str();
}

namespace detail {

inline void render_params_text(std::ostringstream& out, const FamilyParams& p,
                               const RRing& r) {
    if (p.kind == FamilyKind::Inner) {
        for (std::size_t i = 0; i < r.n; ++i)
            for (std::size_t j = 0; j < r.n; ++j) {
                const FpVec& v = p.inner_entries[i * r.n + j];
                if (!vec_is_zero(v))
                    out << "    A[" << i + 1 << "," << j + 1 << "] = " << vec_str(v) << "\n";
            }
        return;
    }
    if (p.kind == FamilyKind::Diagonal) {
        for (std::size_t i = 0; i < r.n; ++i)
            if (!vec_is_zero(p.diagonal[i]))
                out << "    d[" << i + 1 << "] = " << vec_str(p.diagonal[i]) << "\n";
        return;
    }
    std::vector<MapRole> roles = family_map_roles(p.kind, r.n);
    for (std::size_t m = 0; m < roles.size(); ++m) {
        if (p.maps[m].mat.is_zero()) continue;
        out << "    " << roles[m].name << " ("
            << (roles[m].domain == MapDomain::K ? "K" : "J") << " -> K):";
        for (std::size_t row = 0; row < p.maps[m].mat.rows; ++row)
            out << (row ? " ;" : "") << " " << vec_str(p.maps[m].mat.row_vec(row));
        out << "\n";
    }
}

inline nlohmann::json params_json(const FamilyParams& p, const RRing& r) {
    nlohmann::json j;
    j["kind"] = family_name(p.kind);
    if (p.kind == FamilyKind::Inner) {
        nlohmann::json entries = nlohmann::json::array();
        for (const FpVec& v : p.inner_entries) entries.push_back(v);
        j["entries"] = entries;
    } else if (p.kind == FamilyKind::Diagonal) {
        nlohmann::json d = nlohmann::json::array();
        for (const FpVec& v : p.diagonal) d.push_back(v);
        j["diagonal"] = d;
    } else {
        std::vector<MapRole> roles = family_map_roles(p.kind, r.n);
        nlohmann::json maps;
        for (std::size_t m = 0; m < roles.size(); ++m)
            maps[roles[m].name] = matrix_json(p.maps[m].mat);
        j["maps"] = maps;
    }
    return j;
}

} // namespace detail

inline std::string render_decomposition(const Decomposition& dec, const RRing& r,
                                        bool machine) {
    if (machine) {
        nlohmann::json j;
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& [params, endo] : dec.components)
            comps.push_back(detail::params_json(params, r));
        j["components"] = comps;
        j["residual_zero"] = dec.residual_zero();
        nlohmann::json log = nlohmann::json::array();
        for (const StageCheck& c : dec.stage_log) {
            nlohmann::json entry;
            entry["stage"] = stage_name(c.stage);
            entry["ok"] = c.ok;
            if (!c.ok) entry["detail"] = c.detail;
            log.push_back(std::move(entry));
        }
        j["stage_log"] = log;
        if (!dec.residual_zero()) j["residual"] = detail::matrix_json(dec.residual.m);
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "decomposition (" << dec.components.size() << " components)\n";
    for (std::size_t i = 0; i < dec.components.size(); ++i) {
        const auto& [params, endo] = dec.components[i];
        out << "  component " << i + 1 << ": " << family_name(params.kind)
            << (endo.is_zero() ? " (zero)" : "") << "\n";
        if (!endo.is_zero()) detail::render_params_text(out, params, r);
    }
    out << "residual_zero: " << (dec.residual_zero() ? "true" : "false") << "\n";
    for (const StageCheck& c : dec.stage_log)
        out << "stage." << stage_name(c.stage) << ": " << (c.ok ? "ok" : c.detail) << "\n";
    return out.str();
}

inline std::string render_solve(const RRing& r, const std::vector<AdditiveEndo>& basis,
                                bool machine) {
    if (machine) {
        nlohmann::json j;
        j["D"] = r.D;
        j["rank"] = basis.size();
        nlohmann::json b = nlohmann::json::array();
        for (const AdditiveEndo& e : basis) b.push_back(detail::matrix_json(e.m));
        j["basis"] = b;
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "lie derivation module\n";
    out << "D: " << r.D << "\n";
    out << "rank: " << basis.size() << "\n";
    for (std::size_t i = 0; i < basis.size(); ++i) {
        out << "basis " << i + 1 << ":\n";
        for (std::size_t row = 0; row < r.D; ++row)
            out << "  " << detail::vec_str(basis[i].m.row_vec(row)) << "\n";
    }
    return out.str();
}

inline std::string render_families(const RRing& r,
                                   const std::vector<std::pair<FamilyKind, std::size_t>>& ranks,
                                   bool machine) {
    if (machine) {
        nlohmann::json j;
        j["D"] = r.D;
        nlohmann::json m;
        for (const auto& [kind, rank] : ranks) m[family_name(kind)] = rank;
        j["family_ranks"] = m;
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "family parameter spaces\n";
    out << "D: " << r.D << "\n";
    for (const auto& [kind, rank] : ranks)
        out << "family_rank." << family_name(kind) << ": " << rank << "\n";
    return out.str();
}

} // namespace ntlie
