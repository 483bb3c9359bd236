#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tpg/dynamics/evolve.hpp"

namespace tpg {

/// Uniform grid start, start + step, ..., stop (inclusive when stop is on the lattice).
struct GridSpec {
    double start = 0, stop = 0, step = 1;

    [[nodiscard]] std::vector<double> values() const;
    bool operator==(const GridSpec &) const = default;
};

struct ExperimentConfig {
    PumpTreatment engine  = PumpTreatment::Quantized;
    cplx          alpha_p = 4.0;
    double        kappa   = 1.0;

    int    mode_cutoff         = 0;  ///< 0: pump cutoff (quantized) or 24 (classical)
    int    pump_cutoff         = 0;  ///< 0: coherent-tail rule
    int    sodc_cutoff         = 40;
    double pump_tail_tolerance = 1e-12;

    GridSpec            xi{0.0, 0.7, 0.02};
    std::vector<double> xi_panels{0.3, 0.5, 0.7};
    double              xi_conditioning = 0.3;
    double              xi_joint        = 0.3;
    std::vector<double> chain_xi{0.1, 0.3};

    GridSpec            xc{-3.0, 3.0, 0.1};
    std::vector<double> xc_panels{0.0, 1.0, 2.0, 3.0};

    GridSpec joint_grid{-4.0, 4.0, 0.2};
    GridSpec marginal_grid{-6.0, 6.0, 0.05};
    GridSpec wigner_grid{-5.0, 5.0, 0.1};
    GridSpec slice_grid{-4.0, 4.0, 0.1};

    double            tail_threshold = 1e-6;
    double            norm_tolerance = 1e-8;
    PropagationMethod method         = PropagationMethod::Auto;

    std::uint64_t         seed    = 20200101;
    int                   threads = 1;
    bool                  use_cache = true;
    std::filesystem::path cache_dir; ///< empty: TPG_CACHE_DIR or <out>/.cache
    std::filesystem::path out = "out";

    /// Throws ConfigurationError on non-finite or unsorted grids, nonpositive tolerances, bad cutoffs.
    void validate() const;

    [[nodiscard]] int resolved_pump_cutoff() const;
    [[nodiscard]] int resolved_mode_cutoff() const;
    [[nodiscard]] std::filesystem::path resolved_cache_dir() const;

    [[nodiscard]] HamiltonianSpec tps_spec() const;
    [[nodiscard]] HamiltonianSpec sodc_spec() const; ///< always the classical-pump two-mode squeezer
    [[nodiscard]] ModeLayout      tps_layout() const;
    [[nodiscard]] ModeLayout      sodc_layout() const;
    [[nodiscard]] EvolveOptions   evolve_options() const;

    /// Every setting that affects results (excludes out, threads and cache settings).
    [[nodiscard]] nlohmann::json to_json() const;
    /// SHA-256 of the compact dump of to_json().
    [[nodiscard]] std::string hash() const;
};

/// Unknown keys raise ConfigurationError. Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json &j);
ExperimentConfig load_config(const std::filesystem::path &path);

} // namespace tpg
