#pragma once

#include <string>
#include <vector>

#include "tpg/fock/state.hpp"

namespace tpg {

/// Entanglement entropy of a two-mode squeezed vacuum: cosh^2 ln cosh^2 - sinh^2 ln sinh^2.
double tmsv_entropy(double xi);
/// P(n) = tanh^{2n} xi / cosh^2 xi.
double tmsv_photon_dist(double xi, int n);
/// 2 xi.
double tmsv_log_negativity(double xi);
/// <n> per mode, sinh^2 xi.
double tmsv_mean_photons(double xi);

enum class PerturbativeVariant {
    Quoted,         ///< |000> + xi|111> + (xi^2/2)|222>
    SeriesExpansion ///< second order of exp(xi(a†b†c† - abc)): coefficient sqrt(2) xi^2
};

struct PerturbativeTPS {
    double                   xi = 0;
    StateVector              state; ///< modes A, B, C with cutoff 3
    double                   lambda_quoted = 0; ///< 3 xi^2 + 5 xi^4 / 4
    std::vector<std::string> warnings;
};

/// Warns (does not throw) outside the validity window 0 <= xi <= 0.35.
PerturbativeTPS perturbative_tps(double xi, PerturbativeVariant variant = PerturbativeVariant::Quoted);

/// Comparison of the perturbative single-mode quadrature variance with lambda.
struct PerturbativeVarianceReport {
    double xi            = 0;
    double variance      = 0; ///< Var(X_A), vacuum variance 1/2
    double mean_photons  = 0; ///< <n_A> = variance - 1/2
    double lambda_quoted = 0;
    double ratio         = 0; ///< lambda / <n_A>
};
PerturbativeVarianceReport perturbative_variance_report(double xi, PerturbativeVariant variant = PerturbativeVariant::Quoted);

/// Best least-squares c in lambda ~ c * <n_A> over the xi values.
double perturbative_best_fit_scale(const std::vector<double> &xis, PerturbativeVariant variant = PerturbativeVariant::Quoted);

/// Subsystem chain of non-Gaussianities: lhs = d(ABC) - d(AB), rhs = d(AB) - d(A).
struct QreChain {
    double delta_abc = 0, delta_ab = 0, delta_a = 0;
    double lhs = 0, rhs = 0, residual = 0;
};
QreChain qre_chain_residual(const StateVector &psi);

} // namespace tpg
