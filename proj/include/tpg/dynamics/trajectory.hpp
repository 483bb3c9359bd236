#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tpg/dynamics/evolve.hpp"
#include "tpg/fock/density.hpp"

namespace tpg {

struct TrajectoryOptions {
    int     threads     = 1;
    index_t max_subspace = 4096; ///< dense effective-Hamiltonian limit
    double  jump_time_tolerance = 1e-12;
};

/// Monte Carlo wavefunction average of |psi><psi| at each time in `t_grid`.
/// With no collapse operators the deterministic propagator is used, so the result is
/// exactly the evolved pure state. Trajectory k draws from a generator seeded by
/// (seed, k); sums are formed in a fixed order, so results do not depend on `threads`.
std::vector<DensityOperator> trajectory_solver(const SparseOperator &h, std::span<const SparseOperator> collapse_ops,
                                               const StateVector &psi0, std::span<const double> t_grid, int n_traj,
                                               std::uint64_t seed, const TrajectoryOptions &opts = {});

/// Per-trajectory generator seed.
std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index);

} // namespace tpg
