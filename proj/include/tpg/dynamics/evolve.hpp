#pragma once

#include <span>
#include <string>
#include <vector>

#include "tpg/dynamics/hamiltonian.hpp"

namespace tpg {

enum class PropagationMethod { Auto, Dense, Krylov };

std::string       to_string(PropagationMethod m);
PropagationMethod parse_method(std::string_view s);

struct EvolveOptions {
    PropagationMethod method             = PropagationMethod::Auto;
    double            norm_tolerance     = 1e-8;
    double            krylov_local_error = 1e-10;
    int               krylov_dim         = 30;
    double            tail_threshold     = 1e-6; ///< top-two-level mass per mode
    bool              truncation_is_error = false;
    index_t           max_subspace       = index_t{1} << 22;
    index_t           dense_block_limit  = 3000; ///< Auto uses Krylov above this block size
};

struct PointDiagnostics {
    double              norm_drift = 0;
    std::vector<double> top_mass; ///< per layout position, top two levels
};

struct EvolutionResult {
    std::vector<double>           xi_grid;
    std::vector<StateVector>      states;
    std::vector<PointDiagnostics> diagnostics;
    std::vector<std::string>      warnings;
    PropagationMethod             method_used = PropagationMethod::Dense;
    index_t                       subspace_dimension = 0;
};

/// exp(-i H t) psi0 at every t in `times` (nonnegative, nondecreasing). Works on the subspace
/// reachable from psi0's support; the state is not renormalised.
std::vector<StateVector> propagate(const SparseOperator &h, const StateVector &psi0, std::span<const double> times,
                                   const EvolveOptions &opts = {}, PropagationMethod *used = nullptr,
                                   index_t *subspace = nullptr);

/// Evolution on the xi grid with t = xi / (kappa |alpha_p|). Throws NumericalFailure if the
/// norm drifts beyond tolerance; tail mass above threshold is a warning, or a TruncationError
/// when `truncation_is_error` is set.
EvolutionResult evolve(const Hamiltonian &h, const StateVector &psi0, std::span<const double> xi_grid,
                       const EvolveOptions &opts = {});

struct CutoffAuditEntry {
    Mode   mode;
    int    cutoff;
    double top_mass;
    bool   pass;
    int    suggested_cutoff;
};

struct CutoffAuditReport {
    double                        xi_max    = 0;
    double                        threshold = 1e-6;
    bool                          pass      = true;
    std::vector<CutoffAuditEntry> modes;

    [[nodiscard]] std::string summary() const;
};

/// Evolves the process from its initial state to xi_max and checks every mode's top-two-level mass.
CutoffAuditReport cutoff_audit(const HamiltonianSpec &spec, double xi_max, const ModeLayout &layout,
                               double threshold = 1e-6);

/// Coherent-tail rule for the quantized pump cutoff.
int pump_cutoff_for(cplx alpha_p, double tail_tolerance = 1e-12);

} // namespace tpg
