// Command-line front end: solve, decompose, check and demo subcommands over
// instance configs. Reports go to stdout or --out; diagnostics and timing go
// to stderr so reports stay byte-deterministic.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ntlie/report.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string endo_path;
    std::string out_path;
    std::string format = "text";
    std::optional<ntlie::u64> seed;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> max_dim;

    bool machine() const { return format == "machine"; }
};

void apply_overrides(ntlie::InstanceConfig& cfg, const Options& o) {
    if (o.seed) cfg.seed = *o.seed;
    if (o.samples) cfg.samples = *o.samples;
    if (o.max_dim) cfg.max_dim = *o.max_dim;
}

void emit(const Options& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) ntlie::fail(ntlie::Errc::ConfigError, "cannot open output file '" + o.out_path + "'");
    f << text;
}

int exit_code_for(ntlie::Errc c) {
    switch (c) {
    case ntlie::Errc::HypothesisViolation: return 2;
    case ntlie::Errc::TheoremFailure: return 3;
    case ntlie::Errc::CapacityExceeded: return 4;
    case ntlie::Errc::FormulaMismatch:
    case ntlie::Errc::InternalExtractionError: return 70;
    default: return 1;  // config / input errors
    }
}

int run_check(const Options& o) {
    ntlie::InstanceConfig cfg = ntlie::load_instance_config(o.config_path);
    apply_overrides(cfg, o);
    ntlie::Instance inst = ntlie::build_instance(cfg);
    ntlie::TheoremReport rep = ntlie::main_theorem_check(inst.ring, cfg.samples, cfg.seed,
                                                         cfg.max_dim, cfg.name);
    emit(o, ntlie::render_theorem_report(rep, o.machine()));
    std::cerr << "check " << cfg.name << ": " << rep.timing_ms << " ms\n";
    return 0;
}

int run_solve(const Options& o) {
    ntlie::InstanceConfig cfg = ntlie::load_instance_config(o.config_path);
    apply_overrides(cfg, o);
    ntlie::Instance inst = ntlie::build_instance(cfg);
    auto basis = ntlie::lie_derivation_module(inst.ring, cfg.max_dim);
    emit(o, ntlie::render_solve(inst.ring, basis, o.machine()));
    return 0;
}

int run_decompose(const Options& o) {
    ntlie::InstanceConfig cfg = ntlie::load_instance_config(o.config_path);
    apply_overrides(cfg, o);
    ntlie::Instance inst = ntlie::build_instance(cfg);
    ntlie::AdditiveEndo e = ntlie::read_endo_file(o.endo_path, inst.ring);
    ntlie::Decomposition dec = ntlie::decompose(e);
    emit(o, ntlie::render_decomposition(dec, inst.ring, o.machine()));
    return 0;
}

int run_families(const Options& o) {
    ntlie::InstanceConfig cfg = ntlie::load_instance_config(o.config_path);
    apply_overrides(cfg, o);
    ntlie::Instance inst = ntlie::build_instance(cfg);
    emit(o, ntlie::render_families(inst.ring, ntlie::family_space_ranks(inst.ring),
                                   o.machine()));
    return 0;
}

int run_demo(const Options& o) {
    std::string all;
    for (ntlie::InstanceConfig cfg : ntlie::default_instances()) {
        cfg.samples = o.samples.value_or(10);
        if (o.seed) cfg.seed = *o.seed;
        ntlie::Instance inst = ntlie::build_instance(cfg);
        ntlie::TheoremReport rep = ntlie::main_theorem_check(inst.ring, cfg.samples, cfg.seed,
                                                             cfg.max_dim, cfg.name);
        all += ntlie::render_theorem_report(rep, o.machine());
        all += "\n";
        std::cerr << "demo " << cfg.name << ": span_equal="
                  << (rep.span_equal ? "true" : "false") << " rank=" << rep.lie_module_rank
                  << " (" << rep.timing_ms << " ms)\n";
    }
    emit(o, all);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lie derivations of matrix rings R_n(K,J) over finite odd-characteristic "
                 "algebras: exact solver, family builders and theorem checks"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub, bool with_config) {
        if (with_config)
            sub->add_option("config", o.config_path, "instance config file (JSON)")->required();
        sub->add_option("--out", o.out_path, "write the report to this path instead of stdout");
        sub->add_option("--format", o.format, "report format: text|machine")
            ->check(CLI::IsMember({"text", "machine"}));
        sub->add_option("--seed", o.seed, "override the config's sampling seed");
        sub->add_option("--samples", o.samples, "override the config's sample count");
        sub->add_option("--max-dim", o.max_dim, "override the config's dimension cap");
    };

    CLI::App* check = app.add_subcommand(
        "check", "verify the span equality and decompose the whole kernel");
    add_common(check, true);
    CLI::App* solve =
        app.add_subcommand("solve", "compute the Lie-derivation module and print its basis");
    add_common(solve, true);
    CLI::App* decompose = app.add_subcommand(
        "decompose", "decompose an endomorphism read from an endo file");
    add_common(decompose, true);
    decompose->add_option("endo", o.endo_path, "endomorphism file ('p D' header + D rows)")
        ->required();
    CLI::App* families =
        app.add_subcommand("families", "print per-family parameter-space ranks");
    add_common(families, true);
    CLI::App* demo =
        app.add_subcommand("demo", "run the default instance matrix end-to-end");
    add_common(demo, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(o);
        if (solve->parsed()) return run_solve(o);
        if (decompose->parsed()) return run_decompose(o);
        if (families->parsed()) return run_families(o);
        if (demo->parsed()) return run_demo(o);
    } catch (const ntlie::Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
    return 1;
}
