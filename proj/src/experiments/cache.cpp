#include "tpg/experiments/cache.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/fock/snapshot.hpp"
#include "tpg/util/sha256.hpp"

namespace tpg {

namespace fs = std::filesystem;
using nlohmann::json;

const StateVector &EvolutionRun::at(double xi_value) const {
    for(std::size_t i = 0; i < xi.size(); ++i)
        if(std::abs(xi[i] - xi_value) < 1e-9) return states[i];
    throw UsageError(fmt::format("no evolved state at xi={}", xi_value));
}

std::string evolution_key(const HamiltonianSpec &spec, const ModeLayout &layout, const std::vector<double> &xi,
                          const EvolveOptions &opts, double pump_tail_tolerance) {
    const json j{
        {"process", to_string(spec.process)},
        {"pump", to_string(spec.pump)},
        {"alpha_p", json::array({spec.alpha_p.real(), spec.alpha_p.imag()})},
        {"kappa", spec.kappa},
        {"layout", layout.describe()},
        {"xi", xi},
        {"method", to_string(opts.method)},
        {"norm_tolerance", opts.norm_tolerance},
        {"krylov_local_error", opts.krylov_local_error},
        {"krylov_dim", opts.krylov_dim},
        {"tail_threshold", opts.tail_threshold},
        {"pump_tail_tolerance", pump_tail_tolerance},
        {"version", TPG_VERSION},
    };
    return util::sha256_hex(j.dump());
}

namespace {

std::string state_file(std::size_t i) { return fmt::format("state_{:04d}.tpgs", i); }

bool load(const fs::path &dir, const std::string &key, const ModeLayout &layout, EvolutionRun &run) {
    const auto index_path = dir / "index.json";
    if(!fs::exists(index_path)) return false;
    try {
        std::ifstream in(index_path);
        const json    idx = json::parse(in);
        if(idx.at("key").get<std::string>() != key) return false;
        const auto xi    = idx.at("xi").get<std::vector<double>>();
        const auto files = idx.at("files");
        if(xi != run.xi || files.size() != xi.size()) return false;
        std::vector<StateVector> states;
        for(std::size_t i = 0; i < xi.size(); ++i) {
            const auto path = dir / files[i].at("name").get<std::string>();
            if(util::sha256_file(path) != files[i].at("sha256").get<std::string>()) throw CorruptDataError("cache checksum mismatch");
            auto psi = read_snapshot(path);
            if(!(psi.layout() == layout)) throw CorruptDataError("cache layout mismatch");
            states.push_back(std::move(psi));
        }
        run.states   = std::move(states);
        run.warnings = idx.value("warnings", std::vector<std::string>{});
        return true;
    } catch(const std::exception &) {
        return false;
    }
}

void store(const fs::path &dir, const std::string &key, const EvolutionRun &run) {
    fs::create_directories(dir);
    json files = json::array();
    for(std::size_t i = 0; i < run.states.size(); ++i) {
        const auto path = dir / state_file(i);
        write_snapshot(path, run.states[i], json{{"xi", run.xi[i]}, {"key", key}});
        files.push_back({{"name", state_file(i)}, {"sha256", util::sha256_file(path)}});
    }
    const json idx{{"key", key}, {"xi", run.xi}, {"files", files}, {"warnings", run.warnings}};
    const auto tmp = dir / "index.json.tmp";
    {
        std::ofstream out(tmp);
        out << idx.dump(2) << '\n';
    }
    fs::rename(tmp, dir / "index.json");
}

} // namespace

EvolutionRun cached_evolution(const HamiltonianSpec &spec, const ModeLayout &layout, std::vector<double> xi, const EvolveOptions &opts,
                              double pump_tail_tolerance, const fs::path &cache_dir) {
    std::sort(xi.begin(), xi.end());
    xi.erase(std::unique(xi.begin(), xi.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }), xi.end());
    EvolutionRun run;
    run.key = evolution_key(spec, layout, xi, opts, pump_tail_tolerance);
    run.xi  = xi;
    const auto dir = cache_dir.empty() ? fs::path{} : cache_dir / run.key;
    if(!dir.empty() && load(dir, run.key, layout, run)) {
        run.cached = true;
        return run;
    }
    const auto h   = build_hamiltonian(spec, layout);
    auto       res = evolve(h, initial_state(spec, layout, pump_tail_tolerance), xi, opts);
    run.states     = std::move(res.states);
    run.warnings   = std::move(res.warnings);
    if(!dir.empty()) store(dir, run.key, run);
    return run;
}

} // namespace tpg
