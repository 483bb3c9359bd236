#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tpg/dynamics/evolve.hpp"

namespace tpg {

struct EvolutionRun {
    std::string              key; ///< content hash of the inputs
    std::vector<double>      xi;
    std::vector<StateVector> states;
    std::vector<std::string> warnings;
    bool                     cached = false;

    /// State at xi (matched to 1e-9); throws UsageError when absent.
    [[nodiscard]] const StateVector &at(double xi_value) const;
};

/// Content hash of everything that determines an evolution.
std::string evolution_key(const HamiltonianSpec &spec, const ModeLayout &layout, const std::vector<double> &xi,
                          const EvolveOptions &opts, double pump_tail_tolerance);

/// Evolves from the process's initial state, reusing `<cache_dir>/<key>/` when it holds a
/// verified copy. Corrupt or incomplete entries are recomputed and rewritten. An empty
/// cache_dir disables caching.
EvolutionRun cached_evolution(const HamiltonianSpec &spec, const ModeLayout &layout, std::vector<double> xi, const EvolveOptions &opts,
                              double pump_tail_tolerance, const std::filesystem::path &cache_dir);

} // namespace tpg
