#pragma once

#include <span>
#include <string>
#include <vector>

#include "tpg/fock/density.hpp"

namespace tpg {

/// Fock components psi_n(x), n < cutoff, of the position eigenstate |x>.
std::vector<double> quadrature_eigenvector(int cutoff, double x);

struct ConditionalResult {
    double          x_c     = 0;
    double          density = 0;  ///< probability density of the outcome
    StateVector     conditional;  ///< normalised state of every unmeasured mode
    DensityOperator state_ab;     ///< conditional state with all modes but A, B traced
};

/// Projects `measured` onto the quadrature eigenstate |x_c>. Modes other than A, B and the
/// measured one (a quantized pump) are traced in state_ab. Throws UnderflowError when the
/// outcome density is below 1e-300.
ConditionalResult homodyne_project(const StateVector &psi, double x_c, Mode measured = Mode::C);

struct SweepMeasures {
    bool qre2           = true; ///< non-Gaussianity of the conditional A,B state
    bool qre1           = true; ///< non-Gaussianity of the conditional A state
    bool log_negativity = true; ///< A|B
    bool steering       = true; ///< R of A by B
};

struct SweepRow {
    double      x_c     = 0;
    double      density = 0;
    double      qre2 = 0, qre1 = 0, log_negativity = 0, steering_R = 0; ///< NaN when not computed
    std::string flags;                                                 ///< "" or ';'-separated error tags
};

/// One row per outcome, in grid order. Failures are recorded in `flags` and leave NaN measures.
std::vector<SweepRow> conditional_sweep(const StateVector &psi, std::span<const double> x_grid, const SweepMeasures &measures = {},
                                        int threads = 1);

/// Columns x_c,density,qre2,qre1,log_negativity,steering_R,flags.
std::string sweep_csv(const std::vector<SweepRow> &rows);

} // namespace tpg
