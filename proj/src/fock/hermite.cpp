#include "tpg/fock/hermite.hpp"

#include <cmath>

namespace tpg {

std::vector<double> hermite_functions(int cutoff, double x) {
    std::vector<double> psi(static_cast<std::size_t>(std::max(cutoff, 0)), 0.0);
    if(cutoff < 1) return psi;
    psi[0] = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
    if(cutoff > 1) psi[1] = std::sqrt(2.0) * x * psi[0];
    for(int n = 1; n + 1 < cutoff; ++n) {
        const auto k = static_cast<std::size_t>(n);
        psi[k + 1]   = std::sqrt(2.0 / (n + 1)) * x * psi[k] - std::sqrt(static_cast<double>(n) / (n + 1)) * psi[k - 1];
    }
    return psi;
}

Eigen::MatrixXd hermite_table(int cutoff, std::span<const double> xs) {
    Eigen::MatrixXd t(static_cast<index_t>(xs.size()), cutoff);
    for(std::size_t i = 0; i < xs.size(); ++i) {
        const auto psi = hermite_functions(cutoff, xs[i]);
        for(int n = 0; n < cutoff; ++n) t(static_cast<index_t>(i), n) = psi[static_cast<std::size_t>(n)];
    }
    return t;
}

} // namespace tpg
