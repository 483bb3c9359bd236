#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "tpg/fock/density.hpp"

namespace tpg {

/// Values on a 2D grid: values(i, j) at (axis0[i], axis1[j]).
struct WignerGrid {
    std::array<std::string, 2> axis_names;
    std::vector<double>        axis0, axis1;
    Eigen::MatrixXd            values;

    /// Trapezoid integral over the grid.
    [[nodiscard]] double integral() const;
    /// Header "axis0\axis1,<axis1 values>" then one row per axis0 value.
    [[nodiscard]] std::string to_csv() const;
};

/// Single-mode Wigner kernels K(m, n) = W_{|m><n|}(x, p), m, n < levels, quadratures
/// normalised so that the vacuum is e^{-x^2-p^2}/pi.
MatrixXc wigner_kernel(int levels, double x, double p);

/// P(x) = sum_mn rho_mn psi_m(x) psi_n(x). Throws ResolutionError when the grid is too
/// coarse for the occupied levels, or when it spans the state and the trapezoid
/// normalisation is off by more than 1e-2.
std::vector<double> quadrature_marginal(const DensityOperator &rho, std::span<const double> x_grid);

/// Throws ResolutionError when either step is too coarse for the occupied levels.
WignerGrid wigner_single(const DensityOperator &rho, std::span<const double> x_grid, std::span<const double> p_grid);

enum class PhaseAxis { XA = 0, PA = 1, XB = 2, PB = 3 };
std::string to_string(PhaseAxis a);

struct SlicePlane {
    PhaseAxis             first, second; ///< varying coordinates
    std::array<double, 4> fixed{};       ///< values of (X_A, P_A, X_B, P_B); varying entries ignored
};

/// Two-mode Wigner function W(X_A, P_A, X_B, P_B) on a 2D slice.
WignerGrid wigner_slice(const DensityOperator &rho, const SlicePlane &plane, std::span<const double> grid0,
                        std::span<const double> grid1, int threads = 1);

/// |Psi(x_A, x_B, x_C)|^2 summed over any other modes of the state; values[(i*nb + j)*nc + k].
std::vector<double> joint_quadrature_density(const StateVector &psi, std::span<const double> xa, std::span<const double> xb,
                                             std::span<const double> xc);
std::vector<double> joint_quadrature_density(const DensityOperator &rho, std::span<const double> xa, std::span<const double> xb,
                                             std::span<const double> xc);

/// Highest level of `mode` carrying more than `weight` probability.
int effective_level(const DensityOperator &rho, std::size_t pos, double weight = 1e-10);

/// Largest grid step that resolves levels up to n_eff: pi / (2 sqrt(2 n_eff + 1)).
double max_resolved_step(int n_eff);

} // namespace tpg
