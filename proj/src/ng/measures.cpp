#include "tpg/ng/measures.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/gaussian/covariance.hpp"

namespace tpg {

double von_neumann_entropy(const DensityOperator &rho) {
    if(std::abs(rho.trace() - 1) > 1e-6) throw InvalidStateError(fmt::format("density operator trace {:.9f} differs from 1", rho.trace()));
    double s = 0;
    for(double l : rho.eigenvalues())
        if(l > 1e-12) s -= l * std::log(l);
    return s;
}

namespace {

double floored(double delta) {
    if(delta < -1e-8) throw NumericalFailure(fmt::format("negative non-Gaussianity {:.3e}", delta));
    return std::max(delta, 0.0);
}

} // namespace

double qre(const StateVector &psi, const ModeSet &modes) {
    const double gauss = gaussian_entropy(covariance_of(psi, modes));
    const double own   = modes.size() == psi.layout().size() ? 0.0 : von_neumann_entropy(partial_trace(psi, modes));
    return floored(gauss - own);
}

double qre(const DensityOperator &rho, const ModeSet &modes) {
    const double gauss = gaussian_entropy(covariance_of(rho, modes));
    const double own   = von_neumann_entropy(modes.size() == rho.layout().size() ? rho : partial_trace(rho, modes));
    return floored(gauss - own);
}

double log_negativity(const DensityOperator &rho, const ModeSet &transposed) {
    double norm1 = 0;
    for(double l : hermitian_eigenvalues(partial_transpose(rho, transposed).matrix))
        if(std::abs(l) >= 1e-10) norm1 += std::abs(l);
    return std::max(0.0, std::log(norm1));
}

PhotonStatistics photon_statistics(const DensityOperator &rho) {
    if(rho.layout().size() != 1) throw UsageError("photon_statistics needs a single-mode state");
    PhotonStatistics st;
    st.pn.assign(static_cast<std::size_t>(rho.layout()[0].cutoff), 0.0);
    const auto &sup = rho.support();
    for(std::size_t i = 0; i < sup.size(); ++i) st.pn[static_cast<std::size_t>(sup[i])] = rho.matrix()(static_cast<index_t>(i), static_cast<index_t>(i)).real();
    double second = 0;
    for(std::size_t n = 0; n < st.pn.size(); ++n) {
        st.mean_n += static_cast<double>(n) * st.pn[n];
        second += static_cast<double>(n * n) * st.pn[n];
    }
    st.var_n = std::max(0.0, second - st.mean_n * st.mean_n);
    if(st.mean_n >= 1e-12) st.mandel_q = st.var_n / st.mean_n - 1;
    return st;
}

double fidelity(const StateVector &phi, const DensityOperator &rho) {
    const auto &lp = phi.layout();
    const auto &lr = rho.layout();
    if(lp.labels() != lr.labels()) throw UsageError("fidelity: states have different modes");
    std::vector<std::pair<index_t, cplx>> mapped;
    for(const auto &e : phi.entries()) {
        const auto occ    = lp.occupation(e.index);
        bool       inside = true;
        for(std::size_t k = 0; k < occ.size(); ++k) inside &= occ[k] < lr[k].cutoff;
        if(inside) mapped.emplace_back(lr.index(occ), e.amplitude);
    }
    cplx f{};
    for(const auto &[i, ai] : mapped)
        for(const auto &[j, aj] : mapped) f += std::conj(ai) * rho.element(i, j) * aj;
    return f.real();
}

} // namespace tpg
