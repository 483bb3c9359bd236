#include <algorithm>
#include <chrono>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/experiments/config.hpp"
#include "tpg/experiments/figures.hpp"

namespace {

constexpr int exit_ok         = 0;
constexpr int exit_validation = 2;
constexpr int exit_truncation = 3;
constexpr int exit_failure    = 1;

struct Overrides {
    std::string           config;
    std::string           out;
    std::string           engine;
    std::optional<double> xi_max;
    std::optional<int>    cutoff;
    std::optional<int>    threads;
    std::optional<std::uint64_t> seed;
    bool                  no_cache = false;
};

tpg::ExperimentConfig resolve(const Overrides &o) {
    auto cfg = o.config.empty() ? tpg::ExperimentConfig{} : tpg::load_config(o.config);
    if(!o.out.empty()) cfg.out = o.out;
    if(!o.engine.empty()) cfg.engine = tpg::parse_pump(o.engine);
    if(o.xi_max) {
        cfg.xi.stop = *o.xi_max;
        auto drop   = [&](std::vector<double> &v) { std::erase_if(v, [&](double x) { return x > *o.xi_max + 1e-12; }); };
        drop(cfg.xi_panels);
        drop(cfg.chain_xi);
        cfg.xi_conditioning = std::min(cfg.xi_conditioning, *o.xi_max);
        cfg.xi_joint        = std::min(cfg.xi_joint, *o.xi_max);
    }
    if(o.cutoff) cfg.mode_cutoff = *o.cutoff;
    if(o.threads) cfg.threads = *o.threads;
    if(o.seed) cfg.seed = *o.seed;
    if(o.no_cache) cfg.use_cache = false;
    cfg.validate();
    return cfg;
}

void report(const tpg::FigureReport &r, double seconds) {
    fmt::print("{}: wrote {} ({:.1f} s)\n", r.figure, r.manifest.string(), seconds);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Truncated-Fock-space simulator of triple-photon generation and down-conversion"};
    app.set_version_flag("--version", TPG_VERSION);
    app.require_subcommand(1);

    Overrides o;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", o.config, "JSON config file (comments allowed)")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--engine", o.engine, "pump treatment")->check(CLI::IsMember({"classical", "quantized"}));
        sub->add_option("--xi-max", o.xi_max, "largest xi of the sweep")->check(CLI::PositiveNumber);
        sub->add_option("--cutoff", o.cutoff, "per-mode Fock cutoff of the signal modes")->check(CLI::Range(2, 4096));
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1, 1024));
        sub->add_option("--seed", o.seed, "seed for stochastic solvers");
        sub->add_flag("--no-cache", o.no_cache, "recompute evolutions and do not write the cache");
    };

    std::vector<std::pair<std::string, CLI::App *>> runs;
    for(const auto &[name, help] : std::vector<std::pair<std::string, std::string>>{
            {"figure1", "joint density, photon statistics, marginals and Wigner functions"},
            {"figure2", "relative-entropy non-Gaussianity and entanglement versus xi"},
            {"figure3", "homodyne conditioning on mode C"},
            {"figure4", "two-mode Wigner slices of the conditioned state"},
            {"all", "every figure"},
            {"evolve", "evolve both processes and report norms and occupations"}}) {
        auto *sub = app.add_subcommand(name, help);
        add_common(sub);
        runs.emplace_back(name, sub);
    }
    std::string input;
    auto       *analyze = app.add_subcommand("analyze", "verify the manifests and checksums of an output directory");
    analyze->add_option("--input", input, "output directory to verify")->required();

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_validation;
    }

    try {
        if(analyze->parsed()) {
            const auto rep = tpg::verify_outputs(input);
            fmt::print("analyze: {} manifests, {} files\n", rep.manifests, rep.files);
            for(const auto &p : rep.problems) fmt::print(stderr, "  {}\n", p);
            return rep.ok() ? exit_ok : exit_validation;
        }
        tpg::Experiment ex(resolve(o));
        for(const auto &[name, sub] : runs) {
            if(!sub->parsed()) continue;
            const std::vector<std::string> jobs =
                name == "all" ? std::vector<std::string>{"figure1", "figure2", "figure3", "figure4"} : std::vector<std::string>{name};
            for(const auto &job : jobs) {
                const auto t0 = std::chrono::steady_clock::now();
                auto       r  = job == "figure1" ? ex.figure1()
                                : job == "figure2" ? ex.figure2()
                                : job == "figure3" ? ex.figure3()
                                : job == "figure4" ? ex.figure4()
                                                   : ex.evolution();
                report(r, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            }
        }
        return exit_ok;
    } catch(const tpg::TruncationError &e) {
        fmt::print(stderr, "truncation: {}\n", e.what());
        return exit_truncation;
    } catch(const tpg::ConfigurationError &e) {
        fmt::print(stderr, "config: {}\n", e.what());
        return exit_validation;
    } catch(const tpg::UsageError &e) {
        fmt::print(stderr, "usage: {}\n", e.what());
        return exit_validation;
    } catch(const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return exit_failure;
    }
}
