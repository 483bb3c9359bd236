#include "tpg/experiments/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/util/sha256.hpp"

namespace tpg {

using nlohmann::json;

std::vector<double> GridSpec::values() const {
    if(!(step > 0) || !std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || stop < start)
        throw ConfigurationError(fmt::format("invalid grid [{}, {}] step {}", start, stop, step));
    const auto          n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n + 1));
    for(long i = 0; i <= n; ++i) {
        // snap to 12 decimals so 0.02 * 15 prints and hashes as 0.3
        v.push_back(std::round((start + step * static_cast<double>(i)) * 1e12) / 1e12);
    }
    return v;
}

namespace {

json grid_json(const GridSpec &g) { return json::array({g.start, g.stop, g.step}); }

GridSpec grid_from(const json &j, const char *name) {
    if(!j.is_array() || j.size() != 3) throw ConfigurationError(fmt::format("'{}' must be [start, stop, step]", name));
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void check_sorted(const std::vector<double> &v, const char *name) {
    for(std::size_t i = 0; i < v.size(); ++i) {
        if(!std::isfinite(v[i])) throw ConfigurationError(fmt::format("'{}' has a non-finite entry", name));
        if(i && !(v[i] > v[i - 1])) throw ConfigurationError(fmt::format("'{}' must be strictly increasing", name));
    }
}

} // namespace

void ExperimentConfig::validate() const {
    for(const auto *g : {&xi, &xc, &joint_grid, &marginal_grid, &wigner_grid, &slice_grid}) (void)g->values();
    if(xi.start < 0) throw ConfigurationError("xi grid must be nonnegative");
    check_sorted(xi_panels, "xi_panels");
    check_sorted(xc_panels, "xc_panels");
    check_sorted(chain_xi, "chain_xi");
    for(double x : xi_panels)
        if(x < 0) throw ConfigurationError("xi panels must be nonnegative");
    for(double x : chain_xi)
        if(x < 0) throw ConfigurationError("chain_xi must be nonnegative");
    for(double x : {xi_conditioning, xi_joint})
        if(!(x >= 0) || !std::isfinite(x)) throw ConfigurationError("xi_conditioning and xi_joint must be finite and >= 0");
    if(!(kappa > 0) || !std::isfinite(kappa)) throw ConfigurationError("kappa must be > 0");
    if(!(std::abs(alpha_p) > 0)) throw ConfigurationError("alpha_p must be nonzero");
    for(double t : {pump_tail_tolerance, tail_threshold, norm_tolerance})
        if(!(t > 0) || !std::isfinite(t)) throw ConfigurationError("tolerances must be positive");
    if(mode_cutoff < 0 || pump_cutoff < 0 || sodc_cutoff < 2) throw ConfigurationError("cutoffs must be positive");
    if(threads < 1) throw ConfigurationError("threads must be >= 1");
}

int ExperimentConfig::resolved_pump_cutoff() const { return pump_cutoff > 0 ? pump_cutoff : pump_cutoff_for(alpha_p, pump_tail_tolerance); }

int ExperimentConfig::resolved_mode_cutoff() const {
    if(mode_cutoff > 0) return mode_cutoff;
    return engine == PumpTreatment::Quantized ? resolved_pump_cutoff() : 24;
}

std::filesystem::path ExperimentConfig::resolved_cache_dir() const {
    if(!cache_dir.empty()) return cache_dir;
    if(const char *env = std::getenv("TPG_CACHE_DIR"); env && *env) return env;
    return out / ".cache";
}

HamiltonianSpec ExperimentConfig::tps_spec() const {
    return {Process::TPG, engine, engine == PumpTreatment::Quantized ? alpha_p : cplx{std::abs(alpha_p)}, kappa};
}

HamiltonianSpec ExperimentConfig::sodc_spec() const { return {Process::SODC, PumpTreatment::Classical, cplx{std::abs(alpha_p)}, kappa}; }

ModeLayout ExperimentConfig::tps_layout() const {
    return process_layout(tps_spec(), resolved_mode_cutoff(), engine == PumpTreatment::Quantized ? resolved_pump_cutoff() : 0);
}

ModeLayout ExperimentConfig::sodc_layout() const { return process_layout(sodc_spec(), sodc_cutoff); }

EvolveOptions ExperimentConfig::evolve_options() const {
    EvolveOptions o;
    o.method         = method;
    o.norm_tolerance = norm_tolerance;
    o.tail_threshold = tail_threshold;
    return o;
}

json ExperimentConfig::to_json() const {
    return json{
        {"engine", to_string(engine)},
        {"alpha_p", json::array({alpha_p.real(), alpha_p.imag()})},
        {"kappa", kappa},
        {"mode_cutoff", mode_cutoff},
        {"pump_cutoff", pump_cutoff},
        {"sodc_cutoff", sodc_cutoff},
        {"pump_tail_tolerance", pump_tail_tolerance},
        {"xi", grid_json(xi)},
        {"xi_panels", xi_panels},
        {"xi_conditioning", xi_conditioning},
        {"xi_joint", xi_joint},
        {"chain_xi", chain_xi},
        {"xc", grid_json(xc)},
        {"xc_panels", xc_panels},
        {"joint_grid", grid_json(joint_grid)},
        {"marginal_grid", grid_json(marginal_grid)},
        {"wigner_grid", grid_json(wigner_grid)},
        {"slice_grid", grid_json(slice_grid)},
        {"tail_threshold", tail_threshold},
        {"norm_tolerance", norm_tolerance},
        {"method", to_string(method)},
        {"seed", seed},
    };
}

std::string ExperimentConfig::hash() const { return util::sha256_hex(to_json().dump()); }

ExperimentConfig config_from_json(const json &j) {
    if(!j.is_object()) throw ConfigurationError("config must be a JSON object");
    ExperimentConfig c;
    try {
        for(const auto &[key, v] : j.items()) {
            if(key == "engine") c.engine = parse_pump(v.get<std::string>());
            else if(key == "alpha_p") c.alpha_p = v.is_array() ? cplx{v.at(0).get<double>(), v.at(1).get<double>()} : cplx{v.get<double>()};
            else if(key == "kappa") c.kappa = v.get<double>();
            else if(key == "mode_cutoff") c.mode_cutoff = v.get<int>();
            else if(key == "pump_cutoff") c.pump_cutoff = v.get<int>();
            else if(key == "sodc_cutoff") c.sodc_cutoff = v.get<int>();
            else if(key == "pump_tail_tolerance") c.pump_tail_tolerance = v.get<double>();
            else if(key == "xi") c.xi = grid_from(v, "xi");
            else if(key == "xi_panels") c.xi_panels = v.get<std::vector<double>>();
            else if(key == "xi_conditioning") c.xi_conditioning = v.get<double>();
            else if(key == "xi_joint") c.xi_joint = v.get<double>();
            else if(key == "chain_xi") c.chain_xi = v.get<std::vector<double>>();
            else if(key == "xc") c.xc = grid_from(v, "xc");
            else if(key == "xc_panels") c.xc_panels = v.get<std::vector<double>>();
            else if(key == "joint_grid") c.joint_grid = grid_from(v, "joint_grid");
            else if(key == "marginal_grid") c.marginal_grid = grid_from(v, "marginal_grid");
            else if(key == "wigner_grid") c.wigner_grid = grid_from(v, "wigner_grid");
            else if(key == "slice_grid") c.slice_grid = grid_from(v, "slice_grid");
            else if(key == "tail_threshold") c.tail_threshold = v.get<double>();
            else if(key == "norm_tolerance") c.norm_tolerance = v.get<double>();
            else if(key == "method") c.method = parse_method(v.get<std::string>());
            else if(key == "seed") c.seed = v.get<std::uint64_t>();
            else if(key == "threads") c.threads = v.get<int>();
            else if(key == "use_cache") c.use_cache = v.get<bool>();
            else if(key == "cache_dir") c.cache_dir = v.get<std::string>();
            else if(key == "out") c.out = v.get<std::string>();
            else throw ConfigurationError(fmt::format("unknown config key '{}'", key));
        }
    } catch(const json::exception &e) {
        throw ConfigurationError(fmt::format("bad config value: {}", e.what()));
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if(!in) throw ConfigurationError(fmt::format("cannot open config {}", path.string()));
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch(const json::exception &e) {
        throw ConfigurationError(fmt::format("config {} is not valid JSON: {}", path.string(), e.what()));
    }
    return config_from_json(j);
}

} // namespace tpg
