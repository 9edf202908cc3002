#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ntlie/report.hpp"

using namespace ntlie;

namespace {

const std::string kSourceDir = NTLIE_SOURCE_DIR;

InstanceConfig parse_str(const std::string& text) {
    return parse_instance_config(nlohmann::json::parse(text));
}

} // namespace

TEST_CASE("config parsing", "[config]") {
    InstanceConfig cfg = parse_str(R"({
        "name": "demo", "p": 3, "n": 4,
        "algebra": {"kind": "dual_numbers"},
        "ideal": [[0, 1]],
        "caps": {"max_dim": 32},
        "seed": 11, "samples": 5
    })");
    CHECK(cfg.name == "demo");
    CHECK(cfg.n == 4);
    CHECK(cfg.algebra.p == 3);
    CHECK(cfg.max_dim == 32);
    CHECK(cfg.seed == 11);
    CHECK(cfg.samples == 5);
    Instance inst = build_instance(cfg);
    CHECK(inst.ring.D == 22);

    CHECK_THROWS_AS(parse_str(R"({"n": 3})"), Error);                    // p missing
    CHECK_THROWS_AS(parse_str(R"({"p": 3, "n": 3, "algebra": 7})"), Error);
    CHECK_THROWS_AS(parse_str(R"({"p": 3, "n": 3, "algebra": {"kind": "x"}})"), Error);
    // generator length is validated against the algebra dimension on build
    CHECK_THROWS_AS(build_instance(parse_str(R"({"p": 3, "n": 3, "ideal": [[1, 2]]})")),
                    Error);
    CHECK_THROWS_AS(load_instance_config("/nonexistent.json"), Error);
}

TEST_CASE("config errors carry the right codes", "[config]") {
    try {
        build_instance(parse_str(R"({"p": 2, "n": 3})"));
        FAIL("expected EvenCharacteristic");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::EvenCharacteristic);
    }
    try {
        build_instance(parse_str(R"({"p": 3, "n": 2})"));
        FAIL("expected SizeTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SizeTooSmall);
    }
    try {
        build_instance(parse_str(R"({"p": 3, "n": 9, "caps": {"max_dim": 8}})"));
        FAIL("expected CapacityExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CapacityExceeded);
    }
}

TEST_CASE("table algebras load from configs", "[config]") {
    // dual numbers presented as an explicit table
    InstanceConfig cfg = parse_str(R"({
        "p": 3, "n": 3,
        "algebra": {"kind": "table", "one": [1, 0], "labels": ["1", "t"],
                     "table": [[[1,0],[0,1]],[[0,1],[0,0]]]},
        "ideal": [[0, 1]]
    })");
    Instance inst = build_instance(cfg);
    CHECK(inst.ring.D == 12);
    CHECK(inst.ring.commutativeK);
}

TEST_CASE("endomorphism files round-trip", "[config]") {
    InstanceConfig cfg = load_instance_config(kSourceDir + "/configs/n3_f3.json");
    Instance inst = build_instance(cfg);

    AdditiveEndo e = AdditiveEndo::zero(inst.ring);
    e.m.at(0, 2) = 2;
    e.m.at(1, 1) = 1;
    std::stringstream buf;
    write_endo(buf, e);
    AdditiveEndo back = read_endo(buf, inst.ring);
    CHECK(back.m == e.m);

    std::stringstream bad("5 3\n0 0 0\n0 0 0\n0 0 0\n");
    CHECK_THROWS_AS(read_endo(bad, inst.ring), Error);
    std::stringstream short_file("3 3\n0 0 0\n");
    CHECK_THROWS_AS(read_endo(short_file, inst.ring), Error);

    AdditiveEndo zero =
        read_endo_file(kSourceDir + "/configs/zero_n3_f3.endo", inst.ring);
    CHECK(zero.is_zero());
    Decomposition dec = decompose(zero);
    CHECK(dec.residual_zero());

    // a solved kernel element survives the file format and decomposes
    auto basis = lie_derivation_module(inst.ring);
    std::stringstream file;
    write_endo(file, basis[2]);
    Decomposition dec2 = decompose(read_endo(file, inst.ring));
    CHECK(dec2.residual_zero());
    CHECK(dec2.all_stage_checks_ok());
}

TEST_CASE("rendering is deterministic and machine output is JSON", "[config]") {
    InstanceConfig cfg = load_instance_config(kSourceDir + "/configs/n3_dual.json");
    cfg.samples = 10;
    Instance inst = build_instance(cfg);
    TheoremReport rep =
        main_theorem_check(inst.ring, cfg.samples, cfg.seed, cfg.max_dim, cfg.name);

    std::string a = render_theorem_report(rep, false);
    std::string b = render_theorem_report(rep, false);
    CHECK(a == b);

    nlohmann::json j = nlohmann::json::parse(render_theorem_report(rep, true));
    CHECK(j["span_equal"] == true);
    CHECK(j["max_residual_rank"] == 0);

    auto basis = lie_derivation_module(inst.ring);
    std::string solve_text = render_solve(inst.ring, basis, false);
    CHECK(solve_text.find("rank: 24") != std::string::npos);

    Decomposition dec = decompose(basis[0]);
    std::string dtext = render_decomposition(dec, inst.ring, false);
    CHECK(dtext.find("residual_zero: true") != std::string::npos);
    nlohmann::json dj = nlohmann::json::parse(render_decomposition(dec, inst.ring, true));
    CHECK(dj["residual_zero"] == true);
}

TEST_CASE("CLI exit codes", "[config]") {
    namespace fs = std::filesystem;
    const std::string cli = NTLIE_CLI_PATH;
    fs::path tmp = fs::temp_directory_path();

    auto run = [&](const std::string& args, const fs::path& errfile) {
        std::string cmd = cli + " " + args + " >/dev/null 2>" + errfile.string();
        int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    fs::path cfg = tmp / "ntlie_cfg.json", err = tmp / "ntlie_err.txt";

    CHECK(run("check " + kSourceDir + "/configs/n3_f3.json", err) == 0);

    std::ofstream(cfg) << R"({"p": 2, "n": 3})";
    CHECK(run("check " + cfg.string(), err) == 1);
    CHECK(slurp(err).find("EvenCharacteristic") != std::string::npos);

    std::ofstream(cfg)
        << R"({"p": 3, "n": 3, "algebra": {"kind": "upper_triangular_2"}, "ideal": [[0,1,0]]})";
    CHECK(run("check " + cfg.string(), err) == 2);

    std::ofstream(cfg) << R"({"p": 3, "n": 8, "algebra": {"kind": "dual_numbers"}, "ideal": [[0,1]]})";
    CHECK(run("check " + cfg.string(), err) == 4);

    CHECK(run("check " + (tmp / "ntlie_missing.json").string(), err) == 1);
}

TEST_CASE("golden report for the smallest instance", "[config]") {
    InstanceConfig cfg = load_instance_config(kSourceDir + "/configs/n3_f3.json");
    Instance inst = build_instance(cfg);
    TheoremReport rep =
        main_theorem_check(inst.ring, cfg.samples, cfg.seed, cfg.max_dim, cfg.name);
    std::string text = render_theorem_report(rep, false);

    std::ifstream golden(kSourceDir + "/tests/golden/n3_f3_check.txt", std::ios::binary);
    REQUIRE(golden);
    std::stringstream want;
    want << golden.rdbuf();
    CHECK(text == want.str());
}
