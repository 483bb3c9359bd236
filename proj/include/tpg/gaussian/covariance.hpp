#pragma once

#include <string>
#include <vector>

#include "tpg/fock/density.hpp"

namespace tpg {

/// First and second quadrature moments, ordered (X_1, P_1, ..., X_M, P_M) with
/// a = (X + iP)/sqrt(2); the vacuum has sigma = I/2.
struct CovarianceMatrix {
    ModeSet         modes;
    Eigen::VectorXd mean;
    Eigen::MatrixXd sigma;

    [[nodiscard]] std::size_t size() const { return modes.size(); }
    /// Sub-block for a subset of the modes.
    [[nodiscard]] CovarianceMatrix restricted(const ModeSet &keep) const;
    /// Row-major CSV with a header naming the quadratures (X_A,P_A,...).
    [[nodiscard]] std::string to_csv() const;
};

CovarianceMatrix covariance_of(const StateVector &psi, const ModeSet &modes);
CovarianceMatrix covariance_of(const DensityOperator &rho, const ModeSet &modes);

/// Symplectic eigenvalues ascending, one per mode. Throws DomainError unless sigma is
/// symmetric positive definite.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix &cov);

/// (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2), exactly 0 at x = 1/2.
double entropy_function(double nu);

/// Entropy in nats of the Gaussian state with this covariance. Throws DomainError if any
/// symplectic eigenvalue is below 1/2 - 1e-6.
double gaussian_entropy(const CovarianceMatrix &cov);

/// Smallest symplectic eigenvalue after flipping the momenta of `transposed`.
/// Throws UsageError unless `transposed` is a proper nonempty subset of cov.modes.
double ppt_min_symplectic(const CovarianceMatrix &cov, const ModeSet &transposed);

struct SteeringResult {
    double R      = 1; ///< product of inferred standard deviations, vacuum = 1
    double gain_x = 0;
    double gain_p = 0;
};

/// Steering of `steered` by `steering`: R = D(X_s + g_X X_t) D(P_s + g_P P_t) with
/// variance-minimising gains, in quadratures rescaled so the vacuum variance is 1.
/// Throws DegenerateConditioningError when Var(X_t) or Var(P_t) < 1e-12.
SteeringResult steering_R(const CovarianceMatrix &cov, Mode steered, Mode steering);
SteeringResult steering_R(const DensityOperator &rho, Mode steered, Mode steering);

} // namespace tpg
