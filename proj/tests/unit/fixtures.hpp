#pragma once

#include <map>
#include <mutex>

#include "tpg/dynamics/evolve.hpp"

namespace fixtures {

/// Two-mode squeezed vacuum from the classical-pump SODC generator.
inline tpg::StateVector sodc_state(double xi, int cutoff = 60) {
    const tpg::HamiltonianSpec spec{tpg::Process::SODC, tpg::PumpTreatment::Classical, tpg::cplx{1.0}, 1.0};
    const auto                 l = tpg::process_layout(spec, cutoff);
    const double               g[] = {xi};
    return tpg::evolve(tpg::build_hamiltonian(spec, l), tpg::initial_state(spec, l), g).states[0];
}

/// Quantized-pump triple-photon state (alpha_p = 4, pump cutoff 52), memoised per xi.
inline const tpg::StateVector &tps_state(double xi) {
    static std::map<double, tpg::StateVector> cache;
    static std::mutex                         mu;
    std::lock_guard                           lock(mu);
    auto                                      it = cache.find(xi);
    if(it != cache.end()) return it->second;
    const tpg::HamiltonianSpec spec{};
    const int                  d = tpg::pump_cutoff_for(spec.alpha_p);
    const auto                 l = tpg::process_layout(spec, d, d);
    const double               g[] = {xi};
    return cache[xi] = tpg::evolve(tpg::build_hamiltonian(spec, l), tpg::initial_state(spec, l), g).states[0];
}

inline std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    const int           n = static_cast<int>(std::lround((hi - lo) / step));
    for(int i = 0; i <= n; ++i) g.push_back(lo + step * i);
    return g;
}

} // namespace fixtures
