#pragma once

#include <span>
#include <vector>

#include "tpg/common.hpp"

namespace tpg {

/// Fock-state quadrature wavefunctions psi_n(x), n < cutoff, in the convention
/// a = (X + iP)/sqrt(2):  psi_0 = pi^{-1/4} e^{-x^2/2},
/// psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}.
std::vector<double> hermite_functions(int cutoff, double x);

/// Table T(i, n) = psi_n(x_i).
Eigen::MatrixXd hermite_table(int cutoff, std::span<const double> xs);

} // namespace tpg
