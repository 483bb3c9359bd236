#pragma once

#include <optional>
#include <vector>

#include "tpg/fock/density.hpp"

namespace tpg {

/// -Tr rho ln rho in nats; eigenvalues below 1e-12 count as zero.
/// Throws InvalidStateError if the trace is off by more than 1e-6.
double von_neumann_entropy(const DensityOperator &rho);

/// Relative-entropy non-Gaussianity of the reduced state on `modes`:
/// entropy of the Gaussian state with the same moments minus the state's own entropy.
/// Values in [-1e-8, 0) are floored to 0; anything lower raises NumericalFailure.
double qre(const StateVector &psi, const ModeSet &modes);
double qre(const DensityOperator &rho, const ModeSet &modes);

/// ln ||rho^{T_transposed}||_1; eigenvalues with |lambda| < 1e-10 are dropped.
double log_negativity(const DensityOperator &rho, const ModeSet &transposed);

struct PhotonStatistics {
    std::vector<double>   pn;
    double                mean_n = 0;
    double                var_n  = 0;
    std::optional<double> mandel_q; ///< absent when mean_n < 1e-12
};

/// Throws UsageError unless rho is single-mode.
PhotonStatistics photon_statistics(const DensityOperator &rho);

/// <phi|rho|phi>. Both must carry the same modes; cutoffs may differ, and levels of phi
/// beyond rho's cutoffs contribute nothing.
double fidelity(const StateVector &phi, const DensityOperator &rho);

} // namespace tpg
